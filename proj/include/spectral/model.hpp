#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectral/fourier.hpp"
#include "spectral/interval.hpp"

namespace spectral {

// One real radial branch s -> l(s), s = |2 pi xi|_2 >= 0. Scalar models have a
// single branch; triangular systems contribute one branch per diagonal entry.
struct RadialBranch {
    std::function<Interval(const Interval&)> eval;
    // |l(s)| >= coef * s^power for s >= R0, and l keeps the sign tail_sign there.
    double growth_coef = 0.0;
    double growth_power = 0.0;
    double growth_R0 = 0.0;
    int tail_sign = 0;  // 0: constant branch, no growth
    bool constant = false;
};

// Enclosure of an extremum over s in [from, to] (to may be +inf). Unbounded
// sides come back as infinite endpoints.
Interval branch_inf(const RadialBranch& b, double from = 0.0, double to = INFINITY);
Interval branch_sup(const RadialBranch& b, double from = 0.0, double to = INFINITY);
// Enclosure of inf_{s >= from} |l(s) - z|; the lower endpoint is rigorous.
Interval branch_distance(const RadialBranch& b, const ComplexBox& z, double from = 0.0);

// A piece of the essential spectrum: closed real interval, possibly unbounded.
// lo/hi are enclosures of the endpoints; an empty optional marks an infinite end.
struct RangePiece {
    std::optional<Interval> lo;
    std::optional<Interval> hi;
};
struct EssentialSpectrum {
    std::vector<RangePiece> pieces;
    bool unbounded_below() const;
    bool unbounded_above() const;
    // Hull of the finite edges facing the eigenvalue region: sup of the pieces
    // when unbounded below, inf when unbounded above.
    Interval edge() const;
};

enum class ModelKind { SwiftHohenberg, Whitham, GrayScott, Polynomial, Constant };

struct DecayConstants {
    Interval C;
    Interval a;
};

struct DecayTableEntry {
    Interval lambda;  // validity range
    Interval C;
    Interval a;
};

struct Monomial {
    int degree = 2;
    Interval coef;  // G(u) contains coef * u^degree
};

struct ModelDescriptor {
    std::string name;
    ModelKind kind = ModelKind::Polynomial;
    int m = 1;
    int components = 1;
    bool self_adjoint = true;
    double q_multiplier = 2.0;

    std::map<std::string, Interval> params;
    std::vector<Interval> poly_symbol;  // Polynomial kind: l(s) = sum_j c_j s^{2j}
    std::vector<Monomial> nonlinearity; // scalar models
    std::vector<DecayTableEntry> decay_table;
    std::optional<Interval> kappa;      // embedding constant ||u||_inf <= kappa ||u||_H
    std::vector<std::string> sectors;   // declared sector list, may be empty

    Interval param(const std::string& key) const;

    // Scalar symbol on a radial box. Throws UnsupportedModel for systems.
    Interval symbol(const Interval& s) const;
    // 2x2 lower-triangular symbol for Gray-Scott: {l11, l12, l21, l22}.
    std::array<Interval, 4> symbol_matrix(const Interval& s) const;
    std::vector<RadialBranch> branches() const;

    int degree() const;  // N_G
    // Kernel sequence K of DG(U0) = convolution by K.
    FourierSeq dg_kernel(const FourierSeq& U0) const;
    // ||DG(u0) - DG(u)||_{L2 -> L2} <= r0 * lipschitz_per_r0(...) for
    // ||u - u0||_H <= r0, using ||u - u0||_inf <= kappa r0 and ||u0||_inf <= ||U0||_1.
    Interval lipschitz_per_r0(const Interval& U0_ell1, const Interval& r0) const;
    Interval kappa_value() const;
    DecayConstants decay(const Interval& lambda) const;
};

ModelDescriptor sh_model(const Interval& mu, const Interval& nu1, const Interval& nu2, int m);
ModelDescriptor whitham_model(const Interval& T, const Interval& c);
ModelDescriptor gray_scott_model(const Interval& lambda1, const Interval& lambda2);
ModelDescriptor constant_model(const Interval& value, int m = 1);
// l(s) = sum_j coeffs[j] s^{2j}, G(u) = sum monomials. kappa is computed when
// the symbol is integrable, otherwise must be loaded.
ModelDescriptor polynomial_model(std::vector<Interval> coeffs, std::vector<Monomial> nonlinearity, int m);

ModelDescriptor model_from_json(const std::string& text);
ModelDescriptor read_model_file(const std::string& path);
std::string model_to_json(const ModelDescriptor& model);

EssentialSpectrum essential_spectrum(const ModelDescriptor& model);
bool sigma_delta_test(const ModelDescriptor& model, const Interval& delta, const ComplexBox& lambda);
// inf over xi of |l(xi) - z| across all branches (rigorous lower endpoint).
Interval symbol_distance(const ModelDescriptor& model, const ComplexBox& z, double s_from = 0.0);

Interval sh_lambda_max(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0);
// Generic analogue: an upper bound for real eigenvalues of a self-adjoint model
// (sup l + ||K||_1 + Lip) and the matching lower bound.
Interval spectrum_upper_bound(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0);
Interval spectrum_lower_bound(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0);

// ||1/l||_{L2(R^m)} for scalar radial symbols.
Interval rigorous_L2_of_reciprocal(const ModelDescriptor& model, double rel_width = 5e-3);
// sup_xi ||l(xi)^{-1}||_2 for the Gray-Scott symbol.
Interval gray_scott_kappa(const ModelDescriptor& model);

// Whitham dispersion m_T(s) = sqrt(tanh(s)(1 + T s^2)/s) on a box.
Interval whitham_mT(const Interval& s, const Interval& T);
// tanh(s)/s on a box, with the series enclosure near 0.
Interval tanh_over_s(const Interval& s);

// Closed-form decay constants of the Swift-Hohenberg resolvent kernel.
DecayConstants sh_decay(const Interval& mu, const Interval& lambda, int m);

// Lipschitz factor of the Gray-Scott nonlinearity per unit r0 at spectral
// parameter lambda, given sup norms of the two approximate components.
Interval gray_scott_lipschitz_per_r0(const ModelDescriptor& model, const Interval& u01_inf, const Interval& u02_inf,
                                     const Interval& r0, const Interval& lambda);

}  // namespace spectral
