#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace dualdec {

/// One agent's piece of the coupled problem: a convex cost f over a compact
/// box X = [lower, upper], and a convex coupling map g: R^dim -> R^s.
/// Implementations must be immutable after construction.
class LocalProblem {
   public:
    virtual ~LocalProblem() = default;

    virtual int dim() const = 0;
    virtual int coupling_dim() const = 0;

    virtual double cost(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd cost_subgradient(const Eigen::VectorXd& x) const = 0;

    virtual Eigen::VectorXd coupling(const Eigen::VectorXd& x) const = 0;
    /// Row s holds a subgradient of the s-th coupling component.
    virtual Eigen::MatrixXd coupling_subgradient(const Eigen::VectorXd& x) const = 0;

    virtual const Eigen::VectorXd& lower() const = 0;
    virtual const Eigen::VectorXd& upper() const = 0;

    struct InnerSolution {
        Eigen::VectorXd x;
        double value = 0.0;
    };

    /// Closed-form minimizer of cost(x) + mu . coupling(x) over the box, when
    /// the family admits one. Default: none, the solver falls back to
    /// projected subgradient descent.
    virtual std::optional<InnerSolution> inner_minimum(const Eigen::VectorXd& mu) const {
        (void)mu;
        return std::nullopt;
    }
};

/// Scalar quadratic cost with a linear coupling map:
///   f(x) = w x^2 + r x   on [lo, hi],   g(x) = a x - b  in R^s.
/// Strict convexity (w > 0) makes every inner minimizer unique.
class QuadBoxLinearLocal final : public LocalProblem {
   public:
    QuadBoxLinearLocal(double w, double r, double lo, double hi, Eigen::VectorXd a,
                       Eigen::VectorXd b);

    int dim() const override { return 1; }
    int coupling_dim() const override { return static_cast<int>(a_.size()); }

    double cost(const Eigen::VectorXd& x) const override;
    Eigen::VectorXd cost_subgradient(const Eigen::VectorXd& x) const override;
    Eigen::VectorXd coupling(const Eigen::VectorXd& x) const override;
    Eigen::MatrixXd coupling_subgradient(const Eigen::VectorXd& x) const override;

    const Eigen::VectorXd& lower() const override { return lower_; }
    const Eigen::VectorXd& upper() const override { return upper_; }

    std::optional<InnerSolution> inner_minimum(const Eigen::VectorXd& mu) const override;

    double quad_weight() const { return w_; }
    double linear_weight() const { return r_; }
    const Eigen::VectorXd& coupling_slope() const { return a_; }
    const Eigen::VectorXd& coupling_offset() const { return b_; }

   private:
    double w_, r_;
    Eigen::VectorXd lower_, upper_;  // size-1 vectors
    Eigen::VectorXd a_, b_;
};

/// The global instance: N local problems sharing one coupling dimension, plus
/// the multiplier bound M used by the relaxation. Immutable once built.
struct CoupledProblem {
    std::vector<std::shared_ptr<const LocalProblem>> locals;
    int s_dim = 1;
    double big_m = 0.0;

    int n() const { return static_cast<int>(locals.size()); }
};

/// Validates shared s_dim and big_m > 0.
CoupledProblem make_coupled(std::vector<std::shared_ptr<const LocalProblem>> locals, double big_m);

/// The quadratic benchmark family: w ~ U[1,20), r = -20 w, lo ~ U[-35,-30),
/// hi ~ U[30,35), a ~ U[1,11)^s, b ~ U[0,10)^s, M = 1200. Deterministic in
/// the seed; all draws use half-open intervals.
CoupledProblem benchmark_instance(int n, int s_dim, std::uint64_t seed);

struct SlaterResult {
    bool found = false;
    std::vector<Eigen::VectorXd> witness;  ///< per-agent point, only when found
    Eigen::VectorXd coupling_value;        ///< sum of couplings at the witness
};

/// Searches for a strictly feasible point of the coupling constraint:
/// box midpoint, then corners (when cheap), then random interior samples.
/// A false result is a warning, not an error; the search is not certified.
SlaterResult slater_check(const CoupledProblem& p, int samples, std::uint64_t seed);

double eval_cost(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x);
Eigen::VectorXd eval_coupling(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x);

/// Sum of f_i(x_i) + M . 1^T rho_i; throws NegativeSlack on any rho < 0.
double eval_relaxed_cost(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x,
                         const std::vector<Eigen::VectorXd>& rho);

}  // namespace dualdec
