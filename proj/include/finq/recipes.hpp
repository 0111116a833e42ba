#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finq/io.hpp"

namespace finq {

inline constexpr int kRecipeVersion = 1;

// One published number or claim next to what the toolkit computes.
struct Comparison {
    std::string quantity;
    double published;  // in `unit`; NaN when the source gives only a statement
    double computed;
    std::string unit;
    double tolerance;  // relative; <= 0 means the verdict comes from `agrees` directly
    bool agrees;
    std::string note;
    bool informational = false;  // a computed readout with nothing to check
};

struct Artifact {
    std::string suffix;  // appended to the output prefix, e.g. "_map.csv"
    std::string content;
};

struct RecipeResult {
    std::string name;
    std::vector<Artifact> files;
    std::vector<Comparison> comparisons;
    std::vector<std::pair<std::string, std::string>> parameters;  // resolved, lookup order

    const Comparison& find(const std::string& quantity) const;
};

std::vector<std::string> recipe_names();
std::string recipe_summary(const std::string& name);

// Reads pinned defaults overridable through cfg; unknown keys are rejected.
RecipeResult run_recipe(const std::string& name, const Config& cfg = {});

CsvTable comparison_table(const RecipeResult& r);
std::string comparison_text(const RecipeResult& r);
std::string parameter_text(const RecipeResult& r);

}  // namespace finq
