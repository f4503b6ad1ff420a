#include "fkdv/extrapolation.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace fkdv {

namespace {

// gamma weights from the least-squares problem U c ~ -u_mw on the first
// differences, with c_mw = 1. Returns empty when the sequence is constant.
std::vector<double>
mpe_weights(const std::vector<std::vector<double>>& iterates) {
    const std::size_t count = iterates.size();
    if (count < 3)
        throw std::invalid_argument("mpe_extrapolate: need at least 3 iterates (mw >= 1)");
    const std::size_t dim = iterates[0].size();
    for (const auto& v : iterates)
        if (v.size() != dim)
            throw std::invalid_argument("mpe_extrapolate: iterate length mismatch");
    const std::size_t mw = count - 2;

    Eigen::MatrixXd diffs(dim, mw + 1);
    for (std::size_t j = 0; j <= mw; ++j)
        for (std::size_t i = 0; i < dim; ++i)
            diffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                iterates[j + 1][i] - iterates[j][i];

    if (diffs.norm() == 0.0) return {}; // constant sequence

    // rank-revealing solve; rank-deficient U falls back to the truncated
    // minimum-norm solution
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(
        diffs.leftCols(static_cast<Eigen::Index>(mw)));
    Eigen::VectorXd c_head = cod.solve(-diffs.col(static_cast<Eigen::Index>(mw)));

    std::vector<double> c(mw + 1);
    double sum = 0.0, sum_abs = 0.0;
    for (std::size_t j = 0; j < mw; ++j) c[j] = c_head(static_cast<Eigen::Index>(j));
    c[mw] = 1.0;
    for (double v : c) {
        sum += v;
        sum_abs += std::fabs(v);
    }
    if (std::fabs(sum) < 1e-14 * sum_abs)
        throw DegenerateCycleError("mpe_extrapolate: coefficient sum vanishes");
    for (double& v : c) v /= sum;
    return c;
}

} // namespace

std::vector<double>
mpe_extrapolate(const std::vector<std::vector<double>>& iterates) {
    const std::vector<double> gamma = mpe_weights(iterates);
    if (gamma.empty()) return iterates.front();
    std::vector<double> s(iterates[0].size(), 0.0);
    for (std::size_t j = 0; j < gamma.size(); ++j)
        for (std::size_t i = 0; i < s.size(); ++i)
            s[i] += gamma[j] * iterates[j][i];
    return s;
}

Field mpe_extrapolate(const std::vector<Field>& iterates) {
    if (iterates.empty())
        throw std::invalid_argument("mpe_extrapolate: empty iterate list");
    const GridPtr grid = iterates.front().grid();
    std::vector<std::vector<double>> raw;
    raw.reserve(iterates.size());
    for (const auto& f : iterates) {
        if (f.grid()->size() != grid->size())
            throw std::invalid_argument("mpe_extrapolate: iterates on different grids");
        raw.push_back(f.values());
    }
    return Field(grid, mpe_extrapolate(raw));
}

namespace detail {

CycleResult run_mpe_cycle(const Field& start, const ProblemSpec& spec,
                          const ExtrapolationConfig& config) {
    std::vector<Field> psi;
    psi.reserve(static_cast<std::size_t>(config.mw) + 2);
    psi.push_back(start);
    for (int j = 0; j <= config.mw; ++j)
        psi.push_back(petviashvili_step(psi.back(), spec));

    const double plain_res = residual(psi.back(), spec);
    try {
        Field s = mpe_extrapolate(psi);
        const double s_res = residual(s, spec);
        if (config.safeguard && s_res > plain_res)
            return {psi.back(), plain_res, plain_res, false};
        return {std::move(s), s_res, plain_res, true};
    } catch (const DegenerateCycleError&) {
        // recoverable: keep the plain iterate for this cycle
        return {psi.back(), plain_res, plain_res, false};
    }
}

} // namespace detail

ProfileSolution accelerated_solve(const ProblemSpec& spec,
                                  const ExtrapolationConfig& config,
                                  const std::optional<Field>& guess) {
    spec.validate();
    if (config.mw < 1)
        throw std::invalid_argument("accelerated_solve: mw must be >= 1");

    Field phi = guess ? *guess : initial_guess(spec);
    if (norm(phi) == 0.0)
        throw std::invalid_argument("accelerated_solve: zero initial guess");

    IterationReport report;
    int base_steps = 0;
    const int steps_per_cycle = config.mw + 1;
    while (base_steps < spec.max_iter) {
        detail::CycleResult cycle = detail::run_mpe_cycle(phi, spec, config);
        base_steps += steps_per_cycle;

        const double m = stabilizing_factor(cycle.accepted, spec);
        const double diff = norm_diff(cycle.accepted, phi);
        const double res = cycle.accepted_residual;
        report.m_history.push_back(m);
        report.diff_history.push_back(diff);
        report.residual_history.push_back(res);
        report.iterations = base_steps;
        phi = std::move(cycle.accepted);

        if (std::fabs(1.0 - m) <= spec.tol) {
            report.converged_by = StopReason::StabilizingFactor;
            break;
        }
        if (diff <= spec.tol) {
            report.converged_by = StopReason::ConsecutiveDiff;
            break;
        }
        if (res <= spec.tol) {
            report.converged_by = StopReason::Residual;
            break;
        }
    }

    double amp = phi[0], mn = phi[0];
    for (double v : phi.values()) {
        amp = std::max(amp, v);
        mn = std::min(mn, v);
    }
    return ProfileSolution{std::move(phi), spec, std::move(report), amp, mn};
}

} // namespace fkdv
