#pragma once

#include "rmtx/quad.hpp"

namespace rmtx {

/// Ensemble dimensions and coupling: N = 2n + nu, coupling a > 0.
struct TransitionParams {
    int n = 1;
    int nu = 0;
    double a = 0.5;

    int dim() const { return 2 * n + nu; }
    /// Throws DomainError on n < 1, nu not in {0,1}, or a <= 0.
    void validate() const;
};

enum class Regime { subcritical, continued };

struct WeightValue {
    double value;
    Regime regime;
};

/// For a > 1 the one-point weight carries a global phase i^(1+nu) that is
/// dropped in the real form used here; it cancels in every normalised density.
inline int continuation_phase_exponent(int nu) { return 1 + nu; }

/// log|f| and sign of a possibly huge hyperbolic function value.
struct LogValue {
    double log_abs;
    int sign;
};

/// cosh(4x/a^2) for nu = 0, sinh(4x/a^2) for nu = 1.
double f_nu(int nu, double a, double x);
LogValue f_nu_log(int nu, double a, double x);

/// One-point weight g_nu(y) (closed form; real continuation for a > 1).
double g_weight(int nu, double a, double y);
WeightValue g_weight_value(int nu, double a, double y);
/// Direct quadrature of the defining single integral, 0 < a < 1.
double g_weight_def_oracle(int nu, double a, double y, const QuadratureSpec& spec = {});

/// Antisymmetric two-point weight G_nu(x,y) (closed form; real continuation for a > 1).
double G_weight(int nu, double a, double x, double y);
WeightValue G_weight_value(int nu, double a, double x, double y);
/// Direct quadrature of the defining double integral, 0 < a < 1.
double G_weight_def_oracle(int nu, double a, double x, double y, const QuadratureSpec& spec = {});

/// The nu = 1 correction in G_1 = s t G_0 - Gtilde_1.
double G_tilde1(double a, double s, double t);

/// Gbar_nu(y) = int_0^inf G_nu(x, y) dx.
double G_bar(int nu, double a, double y);
/// gbar_nu = int_0^inf g_nu(y) dy in three equivalent closed forms.
double g_bar(int nu, double a);
double g_bar_direct(int nu, double a);
double g_bar_gamma(int nu, double a);

/// Modified two-point weight H = G - g(x) Gbar(y)/gbar + g(y) Gbar(x)/gbar.
double H_weight(int nu, double a, double x, double y);

/// Throws DomainError unless 0 < a < 1.
void require_subcritical(double a, const char* where);

}  // namespace rmtx
