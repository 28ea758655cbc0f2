#ifndef SPECLAB_ZETA_DET_HPP
#define SPECLAB_ZETA_DET_HPP

#include <optional>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

// Eigenvalue list with multiplicities, ascending; the zero mode is included.
struct EvList {
    std::vector<double> lam;
    std::vector<double> mult;

    void push(double l, double m = 1.0) {
        lam.push_back(l);
        mult.push_back(m);
    }
    double max_lambda() const { return lam.empty() ? 0.0 : lam.back(); }
    double min_positive(double tol = 1e-8) const;
    static EvList from_values(const std::vector<double>& values);
};

// Weyl tail lambda_j ~ slope*j + offset; the density beyond the truncation
// is 1/slope per unit lambda.
struct WeylTail {
    double slope = 0.0;
    double offset = 0.0;
    bool valid = false;
};

// Two-parameter fit on the top tenth of the (reliable part of the) list.
WeylTail fit_weyl_tail(const EvList& ev, int reliable_count = -1);

// Fitted short-time trace coefficients: trace ~ c_m1/t + c_mhalf t^{-1/2}
// + c_0 + c_half t^{1/2} + c_1 t (+ log_coeff * log t when probed).
struct HeatModel {
    double c_m1 = 0.0;
    double c_mhalf = 0.0;
    double c_0 = 0.0;
    double c_half = 0.0;
    double c_1 = 0.0;
    double log_coeff = 0.0;
    bool log_probed = false;
    // Guard powers beyond t^1 (pairs of exponent alpha and coefficient);
    // they sharpen the fit of the leading coefficients and enter the
    // small-t integral, but are not reported as physical coefficients.
    std::vector<std::pair<double, double>> extras;
    double fit_residual = 0.0;
    double condition = 0.0;
    WeylTail tail;
};

// Sum of exp(-lambda t) plus the Weyl tail integral beyond the truncation.
// Throws TailUnreliable for t < 2/lambda_max. When subtract_zero_mode is set
// the result is Tr exp(-t Delta) - 1.
double heat_trace(const EvList& ev, const WeylTail& tail, double t,
                  bool subtract_zero_mode = false);

// pin_cm1 constrains the 1/t coefficient (the Weyl leading term c_m1 = N is
// exact since Area = 4 pi N); with noisy truncated spectra this removes the
// 1/T-amplified uncertainty from the determinant assembly.
HeatModel fit_heat_coeffs(const EvList& ev, double t_lo, double t_hi,
                          bool with_log_probe, int n_grid = 80,
                          const WeylTail* tail = nullptr,
                          std::optional<double> pin_cm1 = std::nullopt);

struct DetResult {
    double logdet = 0.0;
    double uncertainty = 0.0;
    double T = 0.0;
    int J = 0;
    double split_spread = 0.0;
    double extrap_spread = 0.0;
    std::vector<std::pair<int, double>> L_table; // (L, logdet at L)
};

// log det' = -zeta'(0) with the zero mode excluded, assembled from the split
// Mellin representation: the fitted expansion integrated analytically on
// (0, T], the tail from sum_j E1(lambda_j T) plus the Weyl-density integral.
double log_det_single(const EvList& ev, const HeatModel& model, double T);

// Richardson extrapolation over a family of spectra indexed by basis degree.
DetResult log_det(const std::vector<std::pair<int, EvList>>& family,
                  double t_lo, double t_hi, double T);

// Per-eigenvalue Richardson extrapolation across a Spectrum family (L
// ascending); eigenvalues are accepted while the extrapolation correction
// stays below eta relative.
struct ExtrapolatedList {
    EvList ev;
    int accepted = 0;
    double max_rel_correction = 0.0;
};
ExtrapolatedList reliable_extrapolated_evlist(const std::vector<Spectrum>& family,
                                              double eta = 0.01);

struct ZetaOptions {
    double eta = 0.01;          // extrapolation acceptance threshold
    double T = 0.3;             // Mellin split point
    double window_factor = 16.0; // fit window floor = factor / lambda_J
    double t_hi = 1.2;
    std::optional<int> degree;  // pins c_m1 = N and the Weyl slope 2/N
};

// The full truncated-spectrum determinant pipeline: extrapolated reliable
// eigenvalues, exact-slope Weyl tail, pinned-leading-coefficient heat fit,
// split Mellin assembly.  Uncertainty = max of the split-point spread and
// the eta-sensitivity of the reliable truncation.
DetResult log_det_from_spectra(const std::vector<Spectrum>& family,
                               const ZetaOptions& opt);

// Exact football spectrum lambda = nu(nu+1), nu = 0, 1/2, 1, ..., nu_max,
// multiplicity 2 nu + 1.
EvList football_spectrum(double nu_max);

// log det' of the exact football metric, via the absolutely convergent
// rearrangement of zeta(s) into Riemann-zeta series; independent of the
// Galerkin/Mellin pipeline.
double football_logdet_oracle(int precision_digits = 12);

// The rearranged series evaluated at real s away from the poles s=1, 1/2, 0;
// used for residue probes against fitted heat coefficients.
double football_zeta_series(double s);

// Three-point Richardson extrapolation y(L) = y_inf + c L^{-p} with unknown
// rate; falls back to the finest value when the differences are not
// monotone.  Ls must be increasing, ys aligned with Ls.
double richardson3(const std::vector<double>& Ls, const std::vector<double>& ys,
                   double* rate = nullptr);

} // namespace speclab

#endif
