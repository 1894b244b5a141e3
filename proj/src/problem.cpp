#include "dualdec/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualdec/errors.hpp"
#include "dualdec/rng.hpp"

namespace dualdec {

namespace {

void check_scalar(const Eigen::VectorXd& x) {
    if (x.size() != 1)
        throw DimensionMismatch("quad local: expected scalar x, got dim " +
                                std::to_string(x.size()));
}

}  // namespace

QuadBoxLinearLocal::QuadBoxLinearLocal(double w, double r, double lo, double hi, Eigen::VectorXd a,
                                       Eigen::VectorXd b)
    : w_(w), r_(r), a_(std::move(a)), b_(std::move(b)) {
    if (!(w > 0.0)) throw InvalidSize("quad local: w must be > 0, got " + std::to_string(w));
    if (!(lo <= hi))
        throw InvalidSize("quad local: empty box [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    if (a_.size() != b_.size() || a_.size() < 1)
        throw DimensionMismatch("quad local: coupling slope/offset sizes disagree");
    lower_ = Eigen::VectorXd::Constant(1, lo);
    upper_ = Eigen::VectorXd::Constant(1, hi);
}

double QuadBoxLinearLocal::cost(const Eigen::VectorXd& x) const {
    check_scalar(x);
    return w_ * x[0] * x[0] + r_ * x[0];
}

Eigen::VectorXd QuadBoxLinearLocal::cost_subgradient(const Eigen::VectorXd& x) const {
    check_scalar(x);
    return Eigen::VectorXd::Constant(1, 2.0 * w_ * x[0] + r_);
}

Eigen::VectorXd QuadBoxLinearLocal::coupling(const Eigen::VectorXd& x) const {
    check_scalar(x);
    return a_ * x[0] - b_;
}

Eigen::MatrixXd QuadBoxLinearLocal::coupling_subgradient(const Eigen::VectorXd& x) const {
    check_scalar(x);
    return a_;  // S x 1
}

std::optional<LocalProblem::InnerSolution> QuadBoxLinearLocal::inner_minimum(
    const Eigen::VectorXd& mu) const {
    if (mu.size() != a_.size())
        throw DimensionMismatch("quad local: mu dim " + std::to_string(mu.size()) +
                                " vs coupling dim " + std::to_string(a_.size()));
    const double slope = r_ + mu.dot(a_);
    const double x = std::clamp(-slope / (2.0 * w_), lower_[0], upper_[0]);
    InnerSolution sol;
    sol.x = Eigen::VectorXd::Constant(1, x);
    sol.value = w_ * x * x + slope * x - mu.dot(b_);
    return sol;
}

CoupledProblem make_coupled(std::vector<std::shared_ptr<const LocalProblem>> locals,
                            double big_m) {
    if (locals.empty()) throw InvalidSize("coupled problem: need at least one local problem");
    if (!(big_m > 0.0))
        throw InvalidSize("coupled problem: M must be > 0, got " + std::to_string(big_m));
    const int s = locals.front()->coupling_dim();
    for (const auto& l : locals)
        if (l->coupling_dim() != s)
            throw DimensionMismatch("coupled problem: locals disagree on coupling dimension");
    CoupledProblem p;
    p.locals = std::move(locals);
    p.s_dim = s;
    p.big_m = big_m;
    return p;
}

CoupledProblem benchmark_instance(int n, int s_dim, std::uint64_t seed) {
    if (n < 1) throw InvalidSize("benchmark instance: need n >= 1");
    if (s_dim < 1) throw InvalidSize("benchmark instance: need s_dim >= 1");
    Rng rng(seed);
    std::vector<std::shared_ptr<const LocalProblem>> locals;
    locals.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double w = rng.uniform(1.0, 20.0);
        const double r = -20.0 * w;
        const double lo = rng.uniform(-35.0, -30.0);
        const double hi = rng.uniform(30.0, 35.0);
        Eigen::VectorXd a(s_dim), b(s_dim);
        for (int s = 0; s < s_dim; ++s) a[s] = rng.uniform(1.0, 11.0);
        for (int s = 0; s < s_dim; ++s) b[s] = rng.uniform(0.0, 10.0);
        locals.push_back(std::make_shared<QuadBoxLinearLocal>(w, r, lo, hi, a, b));
    }
    return make_coupled(std::move(locals), 1200.0);
}

namespace {

Eigen::VectorXd coupling_sum_at(const CoupledProblem& p,
                                const std::vector<Eigen::VectorXd>& x) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(p.s_dim);
    for (int i = 0; i < p.n(); ++i) total += p.locals[i]->coupling(x[i]);
    return total;
}

bool strictly_negative(const Eigen::VectorXd& v) { return (v.array() < 0.0).all(); }

}  // namespace

SlaterResult slater_check(const CoupledProblem& p, int samples, std::uint64_t seed) {
    const int n = p.n();
    int total_dim = 0;
    for (const auto& l : p.locals) total_dim += l->dim();

    auto try_point = [&](const std::vector<Eigen::VectorXd>& x) -> std::optional<SlaterResult> {
        Eigen::VectorXd value = coupling_sum_at(p, x);
        if (strictly_negative(value)) {
            SlaterResult res;
            res.found = true;
            res.witness = x;
            res.coupling_value = std::move(value);
            return res;
        }
        return std::nullopt;
    };

    // Midpoints first.
    std::vector<Eigen::VectorXd> mid(n);
    for (int i = 0; i < n; ++i) mid[i] = 0.5 * (p.locals[i]->lower() + p.locals[i]->upper());
    if (auto r = try_point(mid)) return *r;

    // All corners when the total dimension keeps 2^D small.
    if (total_dim <= 12) {
        const int combos = 1 << total_dim;
        for (int mask = 0; mask < combos; ++mask) {
            std::vector<Eigen::VectorXd> pt(n);
            int bit = 0;
            for (int i = 0; i < n; ++i) {
                const auto& lo = p.locals[i]->lower();
                const auto& hi = p.locals[i]->upper();
                Eigen::VectorXd xi(lo.size());
                for (int k = 0; k < lo.size(); ++k, ++bit)
                    xi[k] = (mask >> bit) & 1 ? hi[k] : lo[k];
                pt[i] = std::move(xi);
            }
            if (auto r = try_point(pt)) return *r;
        }
    } else {
        // Two opposite corners as cheap stand-ins.
        std::vector<Eigen::VectorXd> lo_pt(n), hi_pt(n);
        for (int i = 0; i < n; ++i) {
            lo_pt[i] = p.locals[i]->lower();
            hi_pt[i] = p.locals[i]->upper();
        }
        if (auto r = try_point(lo_pt)) return *r;
        if (auto r = try_point(hi_pt)) return *r;
    }

    // Random interior samples.
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        std::vector<Eigen::VectorXd> pt(n);
        for (int i = 0; i < n; ++i) {
            const auto& lo = p.locals[i]->lower();
            const auto& hi = p.locals[i]->upper();
            Eigen::VectorXd xi(lo.size());
            for (int k = 0; k < lo.size(); ++k) xi[k] = rng.uniform(lo[k], hi[k]);
            pt[i] = std::move(xi);
        }
        if (auto r = try_point(pt)) return *r;
    }
    return {};
}

namespace {

void check_point_dims(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x,
                      const char* what) {
    if (static_cast<int>(x.size()) != p.n())
        throw DimensionMismatch(std::string(what) + ": got " + std::to_string(x.size()) +
                                " blocks for " + std::to_string(p.n()) + " agents");
    for (int i = 0; i < p.n(); ++i)
        if (x[i].size() != p.locals[i]->dim())
            throw DimensionMismatch(std::string(what) + ": agent " + std::to_string(i + 1) +
                                    " block has dim " + std::to_string(x[i].size()) +
                                    ", expected " + std::to_string(p.locals[i]->dim()));
}

}  // namespace

double eval_cost(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x) {
    check_point_dims(p, x, "eval_cost");
    double total = 0.0;
    for (int i = 0; i < p.n(); ++i) total += p.locals[i]->cost(x[i]);
    return total;
}

Eigen::VectorXd eval_coupling(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x) {
    check_point_dims(p, x, "eval_coupling");
    return coupling_sum_at(p, x);
}

double eval_relaxed_cost(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x,
                         const std::vector<Eigen::VectorXd>& rho) {
    check_point_dims(p, x, "eval_relaxed_cost");
    if (static_cast<int>(rho.size()) != p.n())
        throw DimensionMismatch("eval_relaxed_cost: rho block count " +
                                std::to_string(rho.size()) + " vs " + std::to_string(p.n()));
    double total = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        if (rho[i].size() != p.s_dim)
            throw DimensionMismatch("eval_relaxed_cost: rho block " + std::to_string(i + 1) +
                                    " has dim " + std::to_string(rho[i].size()));
        if ((rho[i].array() < 0.0).any())
            throw NegativeSlack("eval_relaxed_cost: negative slack at agent " +
                                std::to_string(i + 1));
        total += p.locals[i]->cost(x[i]) + p.big_m * rho[i].sum();
    }
    return total;
}

}  // namespace dualdec
