#pragma once

// Multiprecision evaluation of the polynomial transforms for a close to 1.
// There the transforms of p_j and q_j are of order (1-a^2)^(j+1) while the
// integrands they come from are of order (1-a^2); the cancellation is done
// exactly here, from closed-form half-line erf moments.

#include <memory>
#include <vector>

#include "rmtx/weights.hpp"

namespace rmtx::detail {

/// Extended precision values at one point, kept for the two-point kernels.
class PreciseEntry {
public:
    virtual ~PreciseEntry() = default;
};

struct PreciseValues {
    std::vector<double> p_trans, q_trans;
    double g = 0.0;
    double G_bar = 0.0;
    double density = 0.0;
    std::shared_ptr<const PreciseEntry> entry;
};

struct PreciseSlice {
    double I = 0.0, S_xy = 0.0, S_yx = 0.0, D = 0.0;
};

class PreciseTransforms {
public:
    virtual ~PreciseTransforms() = default;
    virtual PreciseValues eval(double x) const = 0;
    /// I, S and D from two entries produced by eval at x and y.
    virtual PreciseSlice slice(const PreciseEntry& ex, const PreciseEntry& ey, double x, double y) const = 0;
    virtual int digits() const = 0;
};

/// Decimal digits expected to be cancelled in the transforms; the extended
/// precision path is used once this exceeds the long double margin.
double cancelled_digits(const TransitionParams& params);

/// nullptr when extended precision is not required.
std::unique_ptr<PreciseTransforms> make_precise_transforms(const TransitionParams& params, double c_tilde);

}  // namespace rmtx::detail
