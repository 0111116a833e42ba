#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace finq {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Inclusive uniform grid; points == 1 gives {from}.
std::vector<double> linspace(double from, double to, std::size_t points);

// Interior local maxima. A flat top higher than both sides counts once, at its
// leftmost index.
std::vector<std::size_t> local_maxima(const std::vector<double>& v);

// Thread count: FINQSIM_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index is written by exactly one worker,
// so results stored by index come out in the same order on every run.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace finq
