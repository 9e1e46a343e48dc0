#include "spectral/homotopy.hpp"

#include <algorithm>
#include <optional>

#include "spectral/json_io.hpp"

namespace spectral {

using nlohmann::json;

namespace {

Interval upper(const Interval& x) { return Interval(0.0, std::max(0.0, x.hi())); }

std::vector<ComplexBox> reciprocals(const std::vector<ComplexBox>& v, const ComplexBox& t) {
    std::vector<ComplexBox> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(ComplexBox(1.0) / (x + t));
    return out;
}

IMatrix offdiag(const IMatrix& a) {
    IMatrix r = a;
    for (size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) r(i, i) = ComplexBox(0.0);
    return r;
}

Interval norm2(const IMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return Interval(0.0);
    return upper(op_norm2_bound(a));
}

std::string iv_text(const Interval& x) { return "[" + shortest_decimal(x.lo()) + ", " + shortest_decimal(x.hi()) + "]"; }

void require_positive(std::vector<ConditionCheck>& log, const std::string& name, const Interval& value) {
    ConditionCheck c{name, value, value.certainly_positive()};
    log.push_back(c);
    if (!c.ok) throw ConditionViolated(name + " is not certified: margin " + iv_text(value));
}

// |l - rho| over the in-block symbol values.
Interval min_abs(const std::vector<Interval>& v, const Interval& rho) {
    double m = INFINITY;
    for (const auto& x : v) m = std::min(m, iv_abs(x - rho).lo());
    return Interval(m);
}

// Tail bound on ||R_oo||: off-diagonal convolution mass plus reflected diagonal terms.
Interval tail_operator_norm(const Jacobian& jac) {
    return upper(max(jac.kernel_ell1 - iv_abs(jac.kernel_K0), Interval(0.0)) + jac.refl);
}

// sup over mu in J of ||(DF(U0) + t)^{-1} (L - mu)|| for self-adjoint DF(U0):
// split L - mu = (DF(U0) - mu) - K, bound the first part by
// sup |nu - mu| / |nu + t| over the spectrum, which lies on one side of -t,
// and the second by ||K||_1 / dist(-t, spectrum).
std::optional<Interval> spectral_factor(const ModelDescriptor& model, const Jacobian& jac, const ComplexBox& t,
                                        const JordanDomain& J) {
    if (jac.finite || !jac.self_adjoint || !t.is_real()) return std::nullopt;
    const Interval T = -t.re, one(1.0);
    EssentialSpectrum es = essential_spectrum(model);
    double sup_l = -INFINITY, inf_l = INFINITY;
    for (const auto& b : model.branches()) {
        sup_l = std::max(sup_l, branch_sup(b).hi());
        inf_l = std::min(inf_l, branch_inf(b).lo());
    }
    const Interval K = jac.kernel_ell1;
    if (es.unbounded_below()) {
        if (!std::isfinite(sup_l)) return std::nullopt;
        Interval nu((Interval(sup_l) + K).hi());
        Interval gap = T - nu;
        if (!gap.certainly_positive() || !(J.re.hi() < T.lo())) return std::nullopt;
        Interval f1 = one;
        if (nu.hi() > J.re.lo()) f1 = max(one, (nu - Interval(J.re.lo())) / gap);
        return upper(f1 + K / gap);
    }
    if (!std::isfinite(inf_l)) return std::nullopt;
    Interval nu((Interval(inf_l) - K).lo());
    Interval gap = nu - T;
    if (!gap.certainly_positive() || !(J.re.lo() > T.hi())) return std::nullopt;
    Interval f1 = one;
    if (nu.lo() < J.re.hi()) f1 = max(one, (Interval(J.re.hi()) - nu) / gap);
    return upper(f1 + K / gap);
}

}  // namespace

Interval choose_rho(const ModelDescriptor& model, const JordanDomain& J) {
    if (!J.is_real()) throw ReductionUnavailable("the resolvent reduction needs a real segment J");
    EssentialSpectrum es = essential_spectrum(model);
    bool all_left = true, all_right = true;
    for (const auto& p : es.pieces) {
        all_left = all_left && p.hi && p.hi->hi() < J.re.lo();
        all_right = all_right && p.lo && p.lo->lo() > J.re.hi();
    }
    if (all_left) return Interval(J.re.lo());
    if (all_right) return Interval(J.re.hi());
    throw ReductionUnavailable("the symbol range does not lie on one side of J");
}

Z1Bounds compute_Z1(const PseudoDiag& pd, const Jacobian& jac, const Interval& rho) {
    Z1Bounds z;
    auto inv_lt = reciprocals(pd.lambda, pd.t);
    z.Z13 = norm2(scale_rows(offdiag(pd.D_in), inv_lt));
    z.Z14 = norm2(scale_rows(pd.Pinv_A_in_ring, inv_lt));
    if (jac.finite) {
        z.Z11 = z.Z12 = Interval(0.0);
        return z;
    }
    std::vector<ComplexBox> inv_ring;
    for (const auto& l : jac.ring_symbol) inv_ring.push_back(ComplexBox(Interval(1.0) / (l - rho)));
    z.Z11 = norm2(scale_rows(pd.A_ring_in_P, inv_ring));
    Interval tn = tail_operator_norm(jac);
    if (tn.hi() == 0.0) {
        z.Z12 = Interval(0.0);
    } else {
        Interval dist = symbol_distance(*jac.model, ComplexBox(rho), jac.out_s_from);
        if (!(dist.lo() > 0.0)) throw ConditionViolated("symbol meets rho outside I^N");
        z.Z12 = upper(tn / Interval(dist.lo()));
    }
    return z;
}

FiniteFactor compute_finite_factor(const PseudoDiag& pd, const Jacobian& jac, const JordanDomain& J,
                                   const Interval& rho) {
    FiniteFactor ff;
    auto inv_lt = reciprocals(pd.lambda, pd.t);
    std::vector<ComplexBox> lr;
    for (const auto& l : jac.in_symbol) lr.push_back(ComplexBox(l - rho));
    ff.FN = norm2(scale_cols(scale_rows(pd.PN_inv, inv_lt), lr));
    Interval gap = min_abs(jac.in_symbol, rho);
    if (!(gap.lo() > 0.0)) throw ReductionUnavailable("a symbol value on I^N coincides with rho");
    ff.sJ = upper(Interval(1.0) + Interval(J.re.width()) / gap);
    // mu -> ||A (L_N - mu)|| is convex, so its sup over J sits at an endpoint
    Interval FJ(0.0);
    for (double mu : {J.re.lo(), J.re.hi()}) {
        std::vector<ComplexBox> lm;
        for (const auto& l : jac.in_symbol) lm.push_back(ComplexBox(l - Interval(mu)));
        FJ = max(FJ, norm2(scale_cols(scale_rows(pd.PN_inv, inv_lt), lm)));
    }
    if (ff.FN.hi() > 0.0) ff.sJ = min(ff.sJ, upper(max(FJ / Interval(ff.FN.hi()), Interval(1.0))));
    return ff;
}

namespace {

// Fourier coefficients over (-d, d) of cosh(2 a y).
Interval ch_coeff(int n, const Interval& a, double d) {
    Interval D(d);
    Interval freq = pi() * Interval(static_cast<double>(n)) / D;
    Interval v = Interval(4.0) * a * sinh(Interval(2.0) * a * D) / (Interval(4.0) * sqr(a) + sqr(freq));
    return (n % 2 == 0) ? v : -v;
}

FourierSeq reflected(const FourierSeq& K) {
    if (!K.sector().is_full()) return K;
    FourierSeq r(K.grid(), K.sector(), K.radius());
    for (const auto& n : r.indices()) r.set(n, K.at({-n[0], -n[1]}));
    return r;
}

}  // namespace

ZuBounds zu_from_kernel(const FourierSeq& K, const DecayConstants& dc, double q_multiplier, const FiniteFactor& ff) {
    ZuBounds z;
    z.decay = dc;
    const int m = K.grid().m;
    const double d = K.grid().d;
    bool zero = std::all_of(K.coeffs().begin(), K.coeffs().end(), [](const Interval& x) { return x == Interval(0.0); });
    if (zero) {
        z.Zu1 = z.Zu2 = z.Zu3 = z.Zu1_q = z.Zu2_q = z.Zu3_q = Interval(0.0);
        return z;
    }
    // coefficients of |v0|^2, v0 the multiplier of DG(u0)
    FourierSeq W = conv(K, reflected(K));
    const Interval C = dc.C, a = dc.a, D(d);
    const Interval e = exp(Interval(-2.0) * a * D);
    const Interval q = e / (Interval(1.0) - e);
    const Interval sh = sinh(Interval(2.0) * a * D);
    const int R = W.radius();
    std::vector<Interval> ch(2 * R + 1);
    for (int n = -R; n <= R; ++n) ch[n + R] = ch_coeff(n, a, d);
    Interval zu1sq, zu2sq;
    if (m == 1) {
        Interval Q(0.0);
        for (int n = -R; n <= R; ++n) Q += W.at({n, 0}) * ch[n + R];
        Q = max(Q, Interval(0.0));
        Interval M0 = Interval(2.0) * D * W.at({0, 0});
        zu1sq = sqr(C) * e * Q / a;
        zu2sq = sqr(C) * Interval(2.0) * sqr(q) * (Interval(2.0) * D * M0 + sh * Q / a);
    } else {
        auto S = [&](int n) {
            Interval base = sh * ch[n + R] / a;
            if (n == 0) base += Interval(4.0) * sqr(D);
            return Interval(2.0) * sqr(q) * base;
        };
        auto one = [&](int n) { return n == 0 ? Interval(2.0) * D : Interval(0.0); };
        Interval Jch1(0.0), J1ch(0.0), JS1(0.0), J1S(0.0), JSS(0.0);
        for (int i = -R; i <= R; ++i) {
            for (int j = -R; j <= R; ++j) {
                Interval w = W.at({i, j});
                if (w == Interval(0.0)) continue;
                if (j == 0) Jch1 += w * ch[i + R] * one(0);
                if (i == 0) J1ch += w * one(0) * ch[j + R];
                if (j == 0) JS1 += w * S(i) * one(0);
                if (i == 0) J1S += w * one(0) * S(j);
                JSS += w * S(i) * S(j);
            }
        }
        zu1sq = sqr(C) * e / sqr(a) * max(Jch1 + J1ch, Interval(0.0));
        zu2sq = Interval(3.0) * sqr(C) * max((JS1 + J1S) / a + JSS, Interval(0.0));
    }
    z.Zu1 = upper(iv_sqrt(max(zu1sq, Interval(0.0))));
    z.Zu2 = upper(iv_sqrt(max(zu2sq, Interval(0.0))));
    Interval mult(q_multiplier);
    z.Zu1_q = upper(mult * z.Zu1);
    z.Zu2_q = upper(mult * z.Zu2);
    z.Zu3 = upper(z.Zu2 * ff.FN * ff.sJ);
    z.Zu3_q = upper(z.Zu2_q * ff.FN * ff.sJ);
    return z;
}

ZuBounds compute_Zu(const ModelDescriptor& model, const FourierSeq& U0, const JordanDomain& J, const FiniteFactor& ff) {
    DecayConstants dc = model.decay(J.re);
    if (!(dc.a.lo() > 0.0) || !(dc.C.hi() < INFINITY)) throw DecayDomainMismatch("decay constants unusable on J");
    dc = {Interval(dc.C.hi()), Interval(dc.a.lo())};
    return zu_from_kernel(model.dg_kernel(U0), dc, model.q_multiplier, ff);
}

CBounds compute_C(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, const Interval& dist_rho,
                  const FiniteFactor& ff) {
    CBounds c;
    c.lipschitz = model.lipschitz_per_r0(seq_norms(U0).ell1, r0);
    if (!(dist_rho.lo() > 0.0)) throw ConditionViolated("rho touches the symbol range");
    c.C1 = upper(c.lipschitz / Interval(dist_rho.lo()));
    c.C2 = upper(c.C1 * ff.FN * ff.sJ);
    return c;
}

HomotopyBounds combine_bounds(const Z1Bounds& z1, const ZuBounds& zu, const CBounds& c, const Interval& r0,
                              const Interval& PN_norm, const FiniteFactor& ff) {
    HomotopyBounds hb;
    hb.Z11 = z1.Z11;
    hb.Z12 = z1.Z12;
    hb.Z13 = z1.Z13;
    hb.Z14 = z1.Z14;
    hb.Zu1 = zu.Zu1;
    hb.Zu2 = zu.Zu2;
    hb.Zu3 = zu.Zu3;
    hb.Zu1_q = zu.Zu1_q;
    hb.Zu2_q = zu.Zu2_q;
    hb.Zu3_q = zu.Zu3_q;
    hb.decay = zu.decay;
    hb.C1 = c.C1;
    hb.C2 = c.C2;
    hb.lipschitz = c.lipschitz;
    hb.r0 = r0;
    hb.PN_norm = PN_norm;
    hb.FN = ff.FN;
    hb.sJ = ff.sJ;
    const Interval one(1.0);
    Interval c1r0 = c.C1 * r0;
    require_positive(hb.conditions, "C1 r0 < 1", one - c1r0);
    hb.kappa1 = upper((zu.Zu1 + c1r0) / (one - c1r0));
    Interval s1 = iv_sqrt(one + sqr(hb.kappa1));
    Interval den = one - z1.Z12 - zu.Zu2 - s1 * c1r0;
    require_positive(hb.conditions, "1 - Z12 - Zu2 - sqrt(1 + kappa1^2) C1 r0 > 0", den);
    hb.kappa2 = upper((z1.Z11 + (zu.Zu2 + s1 * c1r0) * PN_norm) / den);
    Interval den_q = one - z1.Z12 - zu.Zu2_q;
    require_positive(hb.conditions, "1 - Z12 - Zu2_q > 0", den_q);
    hb.kappa_q = upper((z1.Z11 + zu.Zu2_q * PN_norm) / den_q);
    return hb;
}

HomotopyBounds compute_bounds(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, const Jacobian& jac,
                              const PseudoDiag& pd, const JordanDomain& J) {
    if (!pd.S_plus_t_invertible) throw ConditionViolated("S + t is not certified invertible");
    if (!jac.finite) {
        ComplexBox shift = ComplexBox(jac.kernel_K0) + pd.t;
        Interval gap = symbol_distance(model, -shift, jac.tail_s_from) - jac.refl;
        if (!(gap.lo() > 0.0)) throw ConditionViolated("S + t is not certified invertible on the tail");
    }
    Interval rho = choose_rho(model, J);
    Interval dist = symbol_distance(model, ComplexBox(rho));
    Z1Bounds z1 = compute_Z1(pd, jac, rho);
    FiniteFactor ff = compute_finite_factor(pd, jac, J, rho);
    ZuBounds zu = compute_Zu(model, U0, J, ff);
    CBounds c = compute_C(model, U0, r0, dist, ff);
    HomotopyBounds hb = combine_bounds(z1, zu, c, r0, pd.PN_norm, ff);
    hb.rho = rho;
    hb.dist_rho = dist;
    return hb;
}

namespace {

std::vector<Interval> shifted_magnitudes(const DiskSet& ds, const ComplexBox& t) {
    std::vector<Interval> out;
    for (const auto& d : ds.disks) out.push_back(abs(d.center + t));
    return out;
}

}  // namespace

Inflation assemble_epsilons(const PseudoDiag& pd, const Jacobian& jac, const DiskSet& ds, const HomotopyBounds& hb) {
    const Interval one(1.0);
    Interval s1 = iv_sqrt(one + sqr(hb.kappa1));
    Interval x_inf = hb.Z13 + hb.Z14 * hb.kappa2 + (hb.Zu3 + hb.C2 * hb.r0 * s1) * (hb.PN_norm + hb.kappa2);
    Interval x_q = hb.Z13 + hb.Z14 * hb.kappa_q + hb.Zu3_q * (hb.PN_norm + hb.kappa_q);
    Interval X = upper(max(x_inf, x_q));
    Inflation inf;
    for (const auto& m : shifted_magnitudes(ds, pd.t)) inf.eps.push_back(upper(m * X));
    inf.tail_factor = X;
    inf.tail_radius_base = upper(jac.tail_radius + X * jac.refl);
    return inf;
}

Inflation assemble_epsilons_selfadjoint(const ModelDescriptor& model, const PseudoDiag& pd, const Jacobian& jac,
                                        const DiskSet& ds, const HomotopyBounds& hb, const JordanDomain& J) {
    const Interval one(1.0);
    const ComplexBox& t = pd.t;
    // q bounds ||(S + t)^{-1} R|| blockwise
    Interval Y1(0.0), Y2(0.0), F_out(0.0);
    if (!jac.finite) {
        std::vector<ComplexBox> inv_ring = reciprocals(jac.ring_diag, t);
        Y1 = norm2(scale_rows(pd.A_ring_in_P, inv_ring));
        double inf_out = INFINITY;
        for (const auto& l : jac.ring_diag) inf_out = std::min(inf_out, abs(l + t).lo());
        ComplexBox shift = ComplexBox(jac.kernel_K0) + t;
        Interval tail_gap = symbol_distance(model, -shift, jac.tail_s_from) - jac.refl;
        if (!(tail_gap.lo() > 0.0)) throw ConditionViolated("S + t is not certified invertible on the tail");
        inf_out = std::min(inf_out, tail_gap.lo());
        Y2 = upper(tail_operator_norm(jac) / Interval(inf_out));
        // sup over mu in J of |l - mu| / |lambda + t| outside I^N; convex in mu,
        // so the endpoints of J suffice
        for (double mu : {J.re.lo(), J.re.hi()}) {
            const Interval m(mu);
            for (size_t r = 0; r < jac.n_ring(); ++r)
                F_out = max(F_out, upper(iv_abs(jac.ring_symbol[r] - m) / abs(jac.ring_diag[r] + t)));
            Interval tail_ratio = one + (abs(ComplexBox(m) + shift) + jac.refl) / Interval(tail_gap.lo());
            F_out = upper(max(F_out, tail_ratio));
        }
    }
    // Two bounds for sup_mu ||(DF(U0) + t)^{-1} (L - mu)||. The first goes
    // through the pseudo-diagonalization and a Neumann series; the second uses
    // the spectral theorem on the self-adjoint DF(U0) = L + K.
    std::optional<Interval> Ft;
    // ||Q|| <= spectral norm of the 2x2 matrix of block norms
    IMatrix blocks(2, 2);
    blocks(0, 0) = ComplexBox(hb.Z13);
    blocks(0, 1) = ComplexBox(hb.Z14);
    blocks(1, 0) = ComplexBox(Y1);
    blocks(1, 1) = ComplexBox(Y2);
    Interval q = min(norm2(blocks), iv_sqrt(sqr(hb.Z13) + sqr(hb.Z14) + sqr(Y1) + sqr(Y2)));
    const Interval d_in = upper(hb.FN * hb.sJ), P_hat = max(hb.PN_norm, one);
    if ((one - q).certainly_positive()) Ft = upper(P_hat * max(d_in, F_out) / (one - q));
    // Block inverse of I + Q through the Schur complement of the outer block,
    // applied to the block diagonal factor diag(d_in, F_out). Pays off when
    // the in-block coupling Z13 is small, which the pseudo-diagonalization gives.
    Interval den_out = one - Y2;
    if (den_out.certainly_positive()) {
        Interval den_in = one - hb.Z13 - hb.Z14 * Y1 / den_out;
        if (den_in.certainly_positive()) {
            Interval m11 = upper(one / den_in);
            Interval m12 = upper(m11 * hb.Z14 / den_out);
            Interval m21 = upper(Y1 * m11 / den_out);
            Interval m22 = upper(one / den_out + Y1 * m11 * hb.Z14 / sqr(den_out));
            IMatrix mb(2, 2);
            mb(0, 0) = ComplexBox(upper(m11 * d_in));
            mb(0, 1) = ComplexBox(upper(m12 * F_out));
            mb(1, 0) = ComplexBox(upper(m21 * d_in));
            mb(1, 1) = ComplexBox(upper(m22 * F_out));
            Interval f = upper(P_hat * norm2(mb));
            Ft = Ft ? min(*Ft, f) : f;
        }
    }
    if (auto f = spectral_factor(model, jac, t, J)) Ft = Ft ? min(*Ft, *f) : *f;
    if (!Ft) throw ConditionViolated("q < 1 is not certified: margin " + iv_text(one - q) +
                                     ", and t does not separate the spectrum of DF(U0) from J");
    Interval s1 = iv_sqrt(one + sqr(hb.kappa1));
    Interval X = upper(hb.Zu2 * *Ft + hb.C1 * *Ft * hb.r0 * s1);
    Interval Xq = upper(hb.Zu2_q * *Ft);
    Interval Xs = max(X, Xq);
    Inflation inf;
    auto mags = shifted_magnitudes(ds, t);
    for (size_t i = 0; i < ds.disks.size(); ++i) inf.eps.push_back(upper(Xs * (ds.disks[i].radius + mags[i])));
    inf.tail_factor = Xs;
    inf.tail_radius_base = upper(jac.tail_radius * (one + Xs) + Xs * jac.refl);
    return inf;
}

DiskSet inflate(const DiskSet& ds, const Inflation& inf, const ComplexBox& t) {
    if (inf.eps.size() != ds.disks.size()) throw DimensionMismatch("one epsilon per disk expected");
    DiskSet out = ds;
    for (size_t i = 0; i < ds.disks.size(); ++i) out.disks[i].radius = upper(ds.disks[i].radius + inf.eps[i]);
    if (out.tail.present) {
        out.tail.radius = inf.tail_radius_base;
        out.tail.eps_factor = inf.tail_factor;
        out.tail.t = t;
    }
    out.clusters.clear();
    return out;
}

bool tail_clear_of(const DiskSet& ds, const ModelDescriptor& model, const JordanDomain& J) {
    if (!ds.tail.present) return true;
    const Interval X = ds.tail.eps_factor, one(1.0);
    if (!(X.hi() < 1.0)) return false;
    const ComplexBox& t = ds.tail.t;
    if (!t.is_real()) return false;
    const Interval tr = t.re, r = ds.tail.radius, K0 = ds.tail.center_shift;
    try {
        for (const auto& b : model.branches()) {
            if (b.constant) {
                ComplexBox c(b.eval(Interval(0.0)) + K0);
                Interval rad = r + X * abs(c + t);
                // gap between the disk centre and J along the real axis
                double gap = std::max(J.re.lo() - c.re.hi(), c.re.lo() - J.re.hi());
                if (!(gap > rad.hi())) return false;
            } else if (b.tail_sign < 0) {
                Interval H = Interval(branch_sup(b, ds.tail.s_from).hi()) + K0;
                H = Interval(H.hi());
                if (!((H + tr).hi() < 0.0)) return false;
                Interval reach = (one - X) * H + r - X * tr;
                if (!(reach.hi() < J.re.lo())) return false;
            } else {
                Interval Lw = Interval(branch_inf(b, ds.tail.s_from).lo()) + K0;
                Lw = Interval(Lw.lo());
                if (!((Lw + tr).lo() > 0.0)) return false;
                Interval reach = (one - X) * Lw - r - X * tr;
                if (!(reach.lo() > J.re.hi())) return false;
            }
        }
    } catch (const ConvergenceFailure&) {
        return false;
    }
    return true;
}

SectorCertificate certify(const ModelDescriptor& model, const Jacobian& jac, const PseudoDiag& pd, const DiskSet& disks,
                          const HomotopyBounds& hb, const JordanDomain& J, const CertifyOptions& opt) {
    SectorCertificate sc;
    sc.sector = jac.finite ? "finite" : jac.sector.name();
    sc.t = pd.t;
    sc.J = J;
    sc.bounds = hb;
    Inflation inf;
    sc.path = "general";
    if (opt.self_adjoint_path && jac.self_adjoint && J.is_real()) {
        try {
            inf = assemble_epsilons_selfadjoint(model, pd, jac, disks, hb, J);
            sc.path = "self_adjoint";
        } catch (const ConditionViolated&) {
            inf = assemble_epsilons(pd, jac, disks, hb);
        }
    } else {
        inf = assemble_epsilons(pd, jac, disks, hb);
    }
    DiskSet ds = inflate(disks, inf, pd.t);
    ds.model = jac.finite ? std::nullopt : std::optional<ModelDescriptor>(model);
    ds = cluster_disks(ds);
    sc.tail_clear = tail_clear_of(ds, model, J);
    if (!sc.tail_clear) throw ClusterTouchesTail("the inflated tail disks are not certified to stay outside J");
    bool any = false;
    double up = -INFINITY, lo = INFINITY;
    for (const auto& c : ds.clusters) {
        const Interval& hr = c.hull.re;
        bool inside, outside;
        if (J.is_real()) {
            inside = hr.lo() > J.re.lo() && hr.hi() < J.re.hi();
            outside = hr.hi() < J.re.lo() || hr.lo() > J.re.hi();
        } else {
            inside = hr.lo() > J.re.lo() && hr.hi() < J.re.hi() && c.hull.im.lo() > J.im.lo() &&
                     c.hull.im.hi() < J.im.hi();
            outside = hr.hi() < J.re.lo() || hr.lo() > J.re.hi() || c.hull.im.hi() < J.im.lo() ||
                      c.hull.im.lo() > J.im.hi();
        }
        if (!inside && !outside)
            throw ClusterExitsDomain("a cluster with real hull " + iv_text(hr) + " crosses the boundary of J " +
                                     iv_text(J.re));
        if (outside) continue;
        if (c.touches_tail) throw ClusterTouchesTail("a cluster inside J meets the tail disks: " + iv_text(hr));
        ClusterStatement st;
        st.hull = c.hull;
        st.multiplicity = c.multiplicity();
        for (size_t i : c.members) st.indices.push_back(ds.disks[i].index);
        if (hr.lo() > 0.0) {
            st.sign = "positive";
            sc.positive += st.multiplicity;
        } else if (hr.hi() < 0.0) {
            st.sign = "negative";
            sc.negative += st.multiplicity;
        } else {
            st.sign = "contains_zero";
            sc.straddling += st.multiplicity;
        }
        up = std::max(up, hr.hi());
        lo = std::min(lo, hr.lo());
        any = true;
        sc.clusters.push_back(st);
    }
    if (opt.invariance_dim) {
        int k = *opt.invariance_dim;
        if (k > sc.straddling)
            throw KernelMismatch("declared invariance dimension " + std::to_string(k) + " exceeds the " +
                                 std::to_string(sc.straddling) + " eigenvalues in clusters containing 0");
        for (auto& st : sc.clusters) {
            if (st.sign != "contains_zero" || k == 0) continue;
            st.zero_eigenvalues = std::min(k, st.multiplicity);
            k -= st.zero_eigenvalues;
        }
    }
    sc.spectral_upper = Interval(any ? up : J.re.lo());
    sc.spectral_lower = Interval(any ? lo : J.re.hi());
    sc.inflated = ds;
    return sc;
}

json bounds_to_json(const HomotopyBounds& hb) {
    json conds = json::array();
    for (const auto& c : hb.conditions) conds.push_back({{"name", c.name}, {"margin", to_json(c.value)}, {"certified", c.ok}});
    return {{"rho", to_json(hb.rho)},         {"dist_rho", to_json(hb.dist_rho)},
            {"Z11", to_json(hb.Z11)},         {"Z12", to_json(hb.Z12)},
            {"Z13", to_json(hb.Z13)},         {"Z14", to_json(hb.Z14)},
            {"Zu1", to_json(hb.Zu1)},         {"Zu2", to_json(hb.Zu2)},
            {"Zu3", to_json(hb.Zu3)},         {"Zu1_q_diagnostic", to_json(hb.Zu1_q)},
            {"Zu2_q", to_json(hb.Zu2_q)},     {"Zu3_q", to_json(hb.Zu3_q)},
            {"C1", to_json(hb.C1)},           {"C2", to_json(hb.C2)},
            {"kappa1", to_json(hb.kappa1)},   {"kappa2", to_json(hb.kappa2)},
            {"kappa_q", to_json(hb.kappa_q)}, {"PN_norm", to_json(hb.PN_norm)},
            {"FN", to_json(hb.FN)},           {"sJ", to_json(hb.sJ)},
            {"lipschitz_per_r0", to_json(hb.lipschitz)},
            {"r0", to_json(hb.r0)},
            {"decay", {{"C", to_json(hb.decay.C)}, {"a", to_json(hb.decay.a)}}},
            {"conditions", conds}};
}

json sector_to_json(const SectorCertificate& sc) {
    json clusters = json::array();
    for (const auto& st : sc.clusters) {
        json idx = json::array();
        for (const auto& n : st.indices) idx.push_back(json::array({n[0], n[1]}));
        std::string statement = "exactly " + std::to_string(st.multiplicity) +
                                " eigenvalue(s), counted with multiplicity, in the union of the listed disks";
        json s = {{"hull", to_json(st.hull)},
                  {"multiplicity", st.multiplicity},
                  {"sign", st.sign},
                  {"indices", idx},
                  {"statement", statement}};
        if (st.sign == "contains_zero") {
            s["zero_eigenvalues"] = st.zero_eigenvalues;
            s["zero_candidates"] = st.multiplicity - st.zero_eigenvalues;
        }
        clusters.push_back(s);
    }
    return {{"sector", sc.sector},
            {"t", to_json(sc.t)},
            {"J", {{"re", to_json(sc.J.re)}, {"im", to_json(sc.J.im)}, {"delta", to_json(sc.J.delta)}}},
            {"path", sc.path},
            {"bounds", bounds_to_json(sc.bounds)},
            {"clusters", clusters},
            {"counts", {{"positive", sc.positive}, {"negative", sc.negative}, {"contains_zero", sc.straddling}}},
            {"tail_clear_of_J", sc.tail_clear},
            {"spectrum_in_J_covered", true},
            {"spectral_upper", to_json(sc.spectral_upper)},
            {"disks", disks_to_json(sc.inflated)}};
}

}  // namespace spectral
