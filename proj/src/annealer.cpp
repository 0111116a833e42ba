#include "finq/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "finq/constants.hpp"
#include "finq/device_params.hpp"
#include "finq/errors.hpp"
#include "finq/special_fns.hpp"

namespace finq {

SpinNetwork::SpinNetwork(int n) : N(n) {
    require(n >= 1 && n <= kMaxSpins, "SpinNetwork: N must be in [1, 12]");
    J.assign(std::size_t(n * n), 0.0);
    Bz.assign(std::size_t(n), 0.0);
}

void SpinNetwork::set_coupling(int i, int j, double v) {
    require(i >= 0 && j >= 0 && i < N && j < N && i != j, "set_coupling: bad index pair");
    coupling(i, j) = v;
    coupling(j, i) = v;
}

double SpinNetwork::delta(double t) const {
    if (schedule.empty()) return 0.0;
    if (t <= schedule.front().first) return schedule.front().second;
    if (t >= schedule.back().first) return schedule.back().second;
    auto it = std::upper_bound(schedule.begin(), schedule.end(), t,
                               [](double v, const std::pair<double, double>& p) { return v < p.first; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double f = (t - a.first) / (b.first - a.first);
    return a.second + f * (b.second - a.second);
}

double SpinNetwork::delta_on(int i, double t) const {
    const double s = delta_scale.empty() ? 1.0 : delta_scale[std::size_t(i)];
    return s * delta(t);
}

double SpinNetwork::total_time() const { return schedule.empty() ? 0.0 : schedule.back().first; }

void SpinNetwork::validate() const {
    require(N >= 1 && N <= kMaxSpins, "SpinNetwork: N must be in [1, 12]");
    require(J.size() == std::size_t(N * N) && Bz.size() == std::size_t(N), "SpinNetwork: size mismatch");
    for (int i = 0; i < N; ++i) {
        require(coupling(i, i) == 0.0, "SpinNetwork: J must have zero diagonal");
        for (int j = 0; j < N; ++j) {
            require(std::isfinite(coupling(i, j)), "SpinNetwork: non-finite coupling");
            require(coupling(i, j) == coupling(j, i), "SpinNetwork: J must be symmetric");
        }
        require(std::isfinite(Bz[std::size_t(i)]), "SpinNetwork: non-finite field");
    }
    require(delta_scale.empty() || delta_scale.size() == std::size_t(N), "SpinNetwork: delta_scale size mismatch");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        require(std::isfinite(schedule[k].first) && std::isfinite(schedule[k].second),
                "SpinNetwork: non-finite schedule point");
        if (k > 0) require(schedule[k].first > schedule[k - 1].first, "SpinNetwork: schedule times must increase");
    }
    require(std::isfinite(dt) && dt > 0.0, "SpinNetwork: dt must be > 0");
}

namespace {

double diagonal_energy(const SpinNetwork& net, std::size_t s) {
    double e = 0.0;
    for (int i = 0; i < net.N; ++i) {
        const double zi = (s >> i & 1u) ? -1.0 : 1.0;
        e += net.Bz[std::size_t(i)] * zi;
        for (int j = i + 1; j < net.N; ++j) {
            const double zj = (s >> j & 1u) ? -1.0 : 1.0;
            e += 0.25 * net.coupling(i, j) * zi * zj;
        }
    }
    return e;
}

template <class DeltaFn>
void apply_impl(const SpinNetwork& net, DeltaFn delta_i, const StateVector& in, StateVector& out) {
    const std::size_t dim = net.dim();
    out.resize(Eigen::Index(dim));
    for (std::size_t s = 0; s < dim; ++s) {
        std::complex<double> acc = diagonal_energy(net, s) * in[Eigen::Index(s)];
        for (int i = 0; i < net.N; ++i) {
            acc += delta_i(i) * in[Eigen::Index(s ^ (std::size_t(1) << i))];
            if (net.ising_only) continue;
            for (int j = i + 1; j < net.N; ++j) {
                // sigma_x sigma_x + sigma_y sigma_y swaps antiparallel pairs with weight 2
                if (((s >> i) ^ (s >> j)) & 1u) {
                    const std::size_t f = s ^ ((std::size_t(1) << i) | (std::size_t(1) << j));
                    acc += 0.5 * net.coupling(i, j) * in[Eigen::Index(f)];
                }
            }
        }
        out[Eigen::Index(s)] = acc;
    }
}

}  // namespace

void apply_hamiltonian(const SpinNetwork& net, double t, const StateVector& in, StateVector& out) {
    apply_impl(net, [&](int i) { return net.delta_on(i, t); }, in, out);
}

void apply_hamiltonian_delta(const SpinNetwork& net, double delta, const StateVector& in, StateVector& out) {
    apply_impl(net, [&](int i) { return (net.delta_scale.empty() ? 1.0 : net.delta_scale[std::size_t(i)]) * delta; },
               in, out);
}

namespace {

Eigen::MatrixXd dense_from(const SpinNetwork& net, double delta) {
    net.validate();
    const Eigen::Index dim = Eigen::Index(net.dim());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    StateVector e = StateVector::Zero(dim), col;
    for (Eigen::Index c = 0; c < dim; ++c) {
        e.setZero();
        e[c] = 1.0;
        apply_hamiltonian_delta(net, delta, e, col);
        H.col(c) = col.real();
    }
    return H;
}

}  // namespace

Eigen::MatrixXd build_hamiltonian(const SpinNetwork& net, double t) { return dense_from(net, net.delta(t)); }

Eigen::MatrixXd build_problem_hamiltonian(const SpinNetwork& net) { return dense_from(net, 0.0); }

GroundState ground_state(const Eigen::MatrixXd& H, double degeneracy_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success) throw DomainError("ground_state: eigensolver did not converge");
    const auto& w = solver.eigenvalues();
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    int deg = 1;
    while (deg < w.size() && w(deg) - w(0) <= degeneracy_tol * scale) ++deg;
    return GroundState{w(0), solver.eigenvectors().leftCols(deg), deg};
}

GroundState ground_state(const SpinNetwork& net, double t) {
    // relative tolerance on the largest level keeps this scale-free
    return ground_state(build_hamiltonian(net, t), 1e-9);
}

double energy_scale(const SpinNetwork& net) {
    double e = 0.0;
    for (int i = 0; i < net.N; ++i) {
        e += std::abs(net.Bz[std::size_t(i)]);
        for (int j = i + 1; j < net.N; ++j) e += 0.75 * std::abs(net.coupling(i, j));
    }
    double dmax = 0.0;
    for (const auto& p : net.schedule) dmax = std::max(dmax, std::abs(p.second));
    double smax = 1.0;
    for (double s : net.delta_scale) smax = std::max(smax, std::abs(s));
    return e + net.N * dmax * smax;
}

namespace {

double ground_weight(const GroundState& g, const StateVector& psi) {
    const Eigen::VectorXcd amp = g.basis.cast<std::complex<double>>().adjoint() * psi;
    return amp.squaredNorm();
}

double expectation(const SpinNetwork& net, double t, const StateVector& psi) {
    StateVector h;
    apply_hamiltonian(net, t, psi, h);
    return psi.dot(h).real();
}

}  // namespace

EvolveResult evolve(const SpinNetwork& net, const EvolveOptions& opt) {
    net.validate();
    if (opt.require_final_zero && !net.schedule.empty())
        require(net.schedule.back().second == 0.0, "evolve: schedule must end at Delta = 0");
    const double T = net.total_time();
    const double kick = energy_scale(net) * net.dt / kConst.hbar;
    if (kick > 0.1) {
        std::ostringstream os;
        os << "evolve: dt too large, energy_scale*dt/hbar = " << kick << " > 0.1; use dt <= "
           << 0.1 * kConst.hbar / energy_scale(net) << " s";
        throw ValidationError(os.str());
    }
    const GroundState target = ground_state(build_problem_hamiltonian(net));
    StateVector psi;
    if (opt.initial) {
        require(opt.initial->size() == Eigen::Index(net.dim()), "evolve: initial state has wrong size");
        psi = *opt.initial;
        psi.normalize();
    } else {
        const GroundState g0 = ground_state(net, 0.0);
        psi = g0.basis.col(0).cast<std::complex<double>>();
    }

    EvolveResult r;
    r.initial_fidelity = ground_weight(target, psi);
    const std::size_t steps = T > 0.0 ? std::size_t(std::ceil(T / net.dt - 1e-9)) : 0;
    const double h = steps ? T / double(steps) : 0.0;
    r.steps = steps;
    const std::size_t every = std::max<std::size_t>(opt.record_every, 1);
    auto record = [&](double t) {
        r.times.push_back(t);
        r.energies.push_back(expectation(net, t, psi));
        r.fidelities.push_back(ground_weight(target, psi));
    };
    record(0.0);
    StateVector term, next;
    const std::complex<double> minus_i(0.0, -1.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double tm = (double(k) + 0.5) * h;
        const double delta = net.delta(tm);
        // Taylor series of exp(-i H h/hbar)
        StateVector acc = psi;
        term = psi;
        for (int m = 1; m < 40; ++m) {
            apply_hamiltonian_delta(net, delta, term, next);
            term = next * (minus_i * h / (kConst.hbar * m));
            acc += term;
            if (term.norm() < 1e-17) break;
        }
        psi = acc;
        if ((k + 1) % every == 0 || k + 1 == steps) record(double(k + 1) * h);
    }
    r.final_state = psi;
    r.norm_drift = std::abs(psi.norm() - 1.0);
    r.fidelity = ground_weight(target, psi);
    return r;
}

double step_halving_error(const SpinNetwork& net, const EvolveOptions& opt) {
    EvolveOptions o = opt;
    o.record_every = std::size_t(-1);
    const EvolveResult a = evolve(net, o);
    SpinNetwork fine = net;
    fine.dt = 0.5 * net.dt;
    const EvolveResult b = evolve(fine, o);
    return (a.final_state - b.final_state).norm();
}

double total_spin_squared(const StateVector& psi, int N) {
    // S^2 = 3N/4 + (1/2) sum_{i<j} sigma_i . sigma_j
    SpinNetwork heis(N);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) heis.set_coupling(i, j, 2.0);  // J/4 * sigma.sigma with J = 2
    StateVector h;
    apply_hamiltonian_delta(heis, 0.0, psi, h);
    return 0.75 * N * psi.squaredNorm() + psi.dot(h).real();
}

std::vector<DevicePair> chain_pairs(int N, double pitch, bool all_pairs) {
    require(N >= 1 && pitch > 0.0, "chain_pairs: need N >= 1 and pitch > 0");
    std::vector<DevicePair> out;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (all_pairs || j == i + 1) out.push_back({i, j, pitch * (j - i)});
    return out;
}

DeviceNetwork couplings_from_device(int N, const std::vector<DevicePair>& pairs, const CouplingInput& base,
                                    const std::vector<double>& lcl_currents, double r, double mu_rel) {
    DeviceNetwork out{SpinNetwork(N), {}};
    for (const auto& p : pairs) {
        require(p.i >= 0 && p.j >= 0 && p.i < N && p.j < N && p.i != p.j, "couplings_from_device: bad pair");
        CouplingInput in = base;
        in.W = p.W;
        const double x = k_F(in) * in.W;
        const double Fp = F_prime(in.dimensionality, x);
        if (std::abs(Fp) < 1e-12) {
            std::ostringstream os;
            os << "pair (" << p.i << "," << p.j << ") sits on a coupling node at k_F W = " << x << "; J set to 0";
            out.warnings.push_back(os.str());
            out.net.set_coupling(p.i, p.j, 0.0);
            continue;
        }
        out.net.set_coupling(p.i, p.j, j_rkky(in));
    }
    require(lcl_currents.empty() || lcl_currents.size() == std::size_t(N),
            "couplings_from_device: need one LCL current per qubit");
    DeviceGeometry geom;
    geom.r = r;
    geom.mu_channel = mu_rel;
    for (std::size_t i = 0; i < lcl_currents.size(); ++i)
        out.net.Bz[i] = zeeman_splitting(std::abs(lcl_field(geom, lcl_currents[i]))) * (lcl_currents[i] < 0 ? -1.0 : 1.0);
    return out;
}

SpinNetwork parse_network(std::istream& in) {
    struct Coupling {
        int i, j;
        double v;
    };
    std::vector<Coupling> cs;
    std::map<int, double> fields;
    std::vector<std::pair<double, double>> sched;
    int maxi = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto fail = [&] { throw ValidationError("network file line " + std::to_string(lineno) + ": cannot parse '" + line + "'"); };
        std::string extra;
        if (head == "field") {
            int i;
            double v;
            if (!(ls >> i >> v) || (ls >> extra)) fail();
            fields[i] = v;
            maxi = std::max(maxi, i);
        } else if (head == "schedule") {
            double t, d;
            if (!(ls >> t >> d) || (ls >> extra)) fail();
            sched.emplace_back(t, d);
        } else {
            std::istringstream hs(head);
            int i, j;
            double v;
            if (!(hs >> i) || !hs.eof() || !(ls >> j >> v) || (ls >> extra)) fail();
            cs.push_back({i, j, v});
            maxi = std::max({maxi, i, j});
        }
    }
    require(maxi >= 0, "network file: no spins defined");
    SpinNetwork net(maxi + 1);
    for (const auto& c : cs) {
        require(c.i >= 0 && c.j >= 0, "network file: negative spin index");
        net.set_coupling(c.i, c.j, c.v);
    }
    for (const auto& [i, v] : fields) {
        require(i >= 0, "network file: negative spin index");
        net.Bz[std::size_t(i)] = v;
    }
    net.schedule = sched;
    net.validate();
    return net;
}

SpinNetwork annealing_chain(int N, double J, double stagger, double delta0, double total_time_hbar_over_J) {
    require(J > 0.0 && delta0 >= 0.0 && total_time_hbar_over_J > 0.0,
            "annealing_chain: need J > 0, delta0 >= 0, total time > 0");
    SpinNetwork net(N);
    for (int i = 0; i + 1 < N; ++i) net.set_coupling(i, i + 1, J);
    for (int i = 0; i < N; ++i) net.Bz[std::size_t(i)] = (i % 2 ? -stagger : stagger) * J;
    net.schedule = {{0.0, delta0 * J}, {total_time_hbar_over_J * kConst.hbar / J, 0.0}};
    net.dt = 0.05 * kConst.hbar / energy_scale(net);
    net.validate();
    return net;
}

}  // namespace finq
