#include "telescopia/numerics.hpp"

#include <cmath>
#include <limits>

namespace telescopia {

bool is_finite(Scalar v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

Scalar checked_div(Scalar num, Scalar den, std::int64_t k, const char* factor,
                   double guard_tol) {
    if (std::abs(den) < guard_tol) {
        throw singularity_error(k, factor,
                                "apparent singularity at k=" + std::to_string(k) +
                                    ": factor " + factor + " vanished");
    }
    return num / den;
}

AcceleratedSequence aitken_accelerate(std::span<const Scalar> partials,
                                      double abs_tol) {
    if (partials.size() < 3) {
        throw invalid_input("aitken_accelerate needs at least 3 partials");
    }
    AcceleratedSequence out;
    out.values.reserve(partials.size() - 2);
    out.passthrough.reserve(partials.size() - 2);
    for (std::size_t i = 0; i + 2 < partials.size(); ++i) {
        const Scalar x0 = partials[i];
        const Scalar x1 = partials[i + 1];
        const Scalar x2 = partials[i + 2];
        const Scalar d2 = x2 - 2.0 * x1 + x0;
        if (std::abs(d2) < abs_tol) {
            out.values.push_back(x2);
            out.passthrough.push_back(true);
        } else {
            const Scalar d1 = x2 - x1;
            out.values.push_back(x2 - d1 * d1 / d2);
            out.passthrough.push_back(false);
        }
    }
    return out;
}

double estimate_tail(std::span<const Scalar> partials, TailModel model) {
    if (partials.size() < 3) {
        throw invalid_input("estimate_tail needs at least 3 partials");
    }
    const std::size_t m = partials.size();
    const double d_last = std::abs(partials[m - 1] - partials[m - 2]);
    switch (model) {
        case TailModel::last_delta:
            return d_last;
        case TailModel::one_over_n_extrapolation: {
            // e_n ~ C/n gives increment d_n ~ C/(n(n-1)); solve for C from the
            // last two increments (positions are 1-based) and average.
            const double d_prev = std::abs(partials[m - 2] - partials[m - 3]);
            const double md = static_cast<double>(m);
            const double c_last = d_last * md * (md - 1.0);
            const double c_prev = d_prev * (md - 1.0) * (md - 2.0);
            return 0.5 * (c_last + c_prev) / md;
        }
    }
    return d_last;
}

LimitEstimate extrapolate_limit(std::span<const Scalar> checkpoints,
                                double abs_tol) {
    if (checkpoints.empty()) {
        throw invalid_input("extrapolate_limit needs a non-empty sequence");
    }
    LimitEstimate best;
    best.value = checkpoints.back();
    best.est_error = checkpoints.size() >= 2
                         ? std::abs(checkpoints[checkpoints.size() - 1] -
                                    checkpoints[checkpoints.size() - 2])
                         : std::numeric_limits<double>::infinity();

    std::vector<Scalar> row(checkpoints.begin(), checkpoints.end());
    while (row.size() >= 3) {
        AcceleratedSequence next = aitken_accelerate(row, abs_tol);
        bool all_passthrough = true;
        bool all_finite = true;
        for (std::size_t i = 0; i < next.values.size(); ++i) {
            all_passthrough = all_passthrough && next.passthrough[i];
            all_finite = all_finite && is_finite(next.values[i]);
        }
        if (!all_finite) break;
        const Scalar cand = next.values.back();
        const double delta =
            next.values.size() >= 2
                ? std::abs(cand - next.values[next.values.size() - 2])
                : std::abs(cand - best.value);
        if (delta <= best.est_error) {
            best.value = cand;
            best.est_error = delta;
        }
        if (all_passthrough) break;  // sequence is flat; deeper passes add nothing
        row = std::move(next.values);
    }
    return best;
}

}  // namespace telescopia
