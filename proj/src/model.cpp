#include "spectral/model.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "spectral/json_io.hpp"

namespace spectral {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinBoxWidth = 0x1p-40;
constexpr long kBoxBudget = 400000;

using Fn = std::function<Interval(const Interval&)>;

// Enclosure of min f over [a, b] by best-first bisection. The lower endpoint is
// the smallest box lower bound that could not be discarded.
Interval bb_min(const Fn& f, double a, double b, double tol) {
    struct Box {
        double lo_bound, a, b;
        bool operator>(const Box& o) const { return lo_bound > o.lo_bound; }
    };
    std::priority_queue<Box, std::vector<Box>, std::greater<Box>> heap;
    double ub = kInf;
    auto probe = [&](double x) { ub = std::min(ub, f(Interval(x)).hi()); };
    const int seeds = 64;
    for (int i = 0; i < seeds; ++i) {
        double x0 = a + (b - a) * i / seeds;
        double x1 = i + 1 == seeds ? b : a + (b - a) * (i + 1) / seeds;
        heap.push({f(Interval(x0, x1)).lo(), x0, x1});
        probe(x0);
    }
    probe(b);
    double floor_lo = kInf;
    long budget = kBoxBudget;
    while (!heap.empty()) {
        Box bx = heap.top();
        double slack = tol * std::max(1.0, std::fabs(ub));
        if (bx.lo_bound >= ub - slack) return {std::min(bx.lo_bound, floor_lo), ub};
        heap.pop();
        double w = bx.b - bx.a;
        if (w <= kMinBoxWidth * std::max(1.0, std::fabs(bx.a)) || --budget <= 0) {
            floor_lo = std::min(floor_lo, bx.lo_bound);
            if (budget <= 0) {
                while (!heap.empty()) {
                    floor_lo = std::min(floor_lo, heap.top().lo_bound);
                    heap.pop();
                }
                break;
            }
            continue;
        }
        double m = 0.5 * (bx.a + bx.b);
        probe(m);
        heap.push({f(Interval(bx.a, m)).lo(), bx.a, m});
        heap.push({f(Interval(m, bx.b)).lo(), m, bx.b});
    }
    return {std::min(floor_lo, ub), ub};
}

// Rigorous lower bound of coef * R^power.
double growth_lower(const RadialBranch& b, double R) {
    if (R <= 0.0) return 0.0;
    Interval v = Interval(b.growth_coef) * exp(Interval(b.growth_power) * log(Interval(R)));
    return v.lo();
}

RadialBranch negate(const RadialBranch& b) {
    RadialBranch n = b;
    auto f = b.eval;
    n.eval = [f](const Interval& s) { return -f(s); };
    n.tail_sign = -b.tail_sign;
    return n;
}

constexpr double kTol = 1e-14;

}  // namespace

Interval branch_inf(const RadialBranch& b, double from, double to) {
    if (b.constant) return b.eval(Interval(0.0));
    if (std::isfinite(to)) return bb_min(b.eval, from, to, kTol);
    if (b.tail_sign < 0) {
        double probe = std::max({from, b.growth_R0, 1.0});
        return Interval::from_above(b.eval(Interval(probe)).hi());  // lo = -inf
    }
    double R = std::max({from + 1.0, b.growth_R0, 1.0});
    for (int it = 0; it < 64; ++it, R *= 2.0) {
        Interval res = bb_min(b.eval, from, R, kTol);
        if (growth_lower(b, R) >= res.hi()) return res;
    }
    throw ConvergenceFailure("tail of the symbol could not be closed");
}

Interval branch_sup(const RadialBranch& b, double from, double to) {
    if (b.constant) return b.eval(Interval(0.0));
    if (!std::isfinite(to) && b.tail_sign > 0) {
        double probe = std::max({from, b.growth_R0, 1.0});
        return Interval::from_below(b.eval(Interval(probe)).lo());
    }
    return -branch_inf(negate(b), from, to);
}

Interval branch_distance(const RadialBranch& b, const ComplexBox& z, double from) {
    auto f = b.eval;
    Fn g = [f, z](const Interval& s) { return abs(ComplexBox(f(s)) - z); };
    if (b.constant) return g(Interval(0.0));
    const double zmag = abs(z).hi();
    double R = std::max({from + 1.0, b.growth_R0, 1.0});
    for (int it = 0; it < 64; ++it, R *= 2.0) {
        Interval res = bb_min(g, from, R, kTol);
        if ((Interval(growth_lower(b, R)) - Interval(zmag)).lo() >= res.hi()) return res;
    }
    throw ConvergenceFailure("tail of the distance could not be closed");
}

bool EssentialSpectrum::unbounded_below() const {
    return std::any_of(pieces.begin(), pieces.end(), [](const RangePiece& p) { return !p.lo; });
}

bool EssentialSpectrum::unbounded_above() const {
    return std::any_of(pieces.begin(), pieces.end(), [](const RangePiece& p) { return !p.hi; });
}

Interval EssentialSpectrum::edge() const {
    if (pieces.empty()) throw InvalidParameter("empty essential spectrum");
    std::optional<Interval> e;
    const bool below = unbounded_below();
    for (const auto& p : pieces) {
        const auto& side = below ? p.hi : p.lo;
        if (!side) continue;
        e = e ? (below ? max(*e, *side) : min(*e, *side)) : *side;
    }
    if (!e) throw InvalidParameter("essential spectrum has no finite edge");
    return *e;
}

Interval ModelDescriptor::param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw InvalidParameter("model " + name + " lacks parameter " + key);
    return it->second;
}

Interval tanh_over_s(const Interval& s) {
    Interval as = iv_abs(s);
    // tanh(x)/x is even and decreasing on [0, inf)
    auto at = [](double x) -> Interval {
        if (x == 0.0) return Interval(1.0);
        Interval X(x);
        if (x <= 0.25) {
            // alternating Maclaurin series with decreasing terms
            Interval x2 = sqr(X);
            Interval lo = Interval(1.0) - x2 / Interval(3.0);
            Interval hi = lo + Interval(2.0) * sqr(x2) / Interval(15.0);
            return hull(lo, hi);
        }
        return tanh(X) / X;
    };
    return {at(as.hi()).lo(), at(as.lo()).hi()};
}

Interval whitham_mT(const Interval& s, const Interval& T) {
    return iv_sqrt(tanh_over_s(s) * (Interval(1.0) + T * sqr(s)));
}

Interval ModelDescriptor::symbol(const Interval& s) const {
    switch (kind) {
        case ModelKind::SwiftHohenberg: {
            Interval w = Interval(1.0) - sqr(s);
            return -sqr(w) - param("mu");
        }
        case ModelKind::Whitham:
            return whitham_mT(s, param("T")) - param("c");
        case ModelKind::Polynomial: {
            Interval s2 = sqr(s), acc(0.0);
            for (size_t j = poly_symbol.size(); j-- > 0;) acc = acc * s2 + poly_symbol[j];
            return acc;
        }
        case ModelKind::Constant:
            return param("value");
        case ModelKind::GrayScott:
            throw UnsupportedModel("Gray-Scott has a matrix symbol");
    }
    return Interval(0.0);
}

std::array<Interval, 4> ModelDescriptor::symbol_matrix(const Interval& s) const {
    if (kind != ModelKind::GrayScott) {
        Interval l = symbol(s);
        return {l, Interval(0.0), Interval(0.0), l};
    }
    Interval l1 = param("lambda1"), l2 = param("lambda2"), s2 = sqr(s);
    return {-l1 * s2 - Interval(1.0), Interval(0.0), l1 * l2 - Interval(1.0), -s2 - l2};
}

std::vector<RadialBranch> ModelDescriptor::branches() const {
    std::vector<RadialBranch> out;
    switch (kind) {
        case ModelKind::SwiftHohenberg: {
            RadialBranch b;
            ModelDescriptor self = *this;
            b.eval = [self](const Interval& s) { return self.symbol(s); };
            // (s^2 - 1)^2 + mu >= (9/16) s^4 once s >= 2
            b.growth_coef = 9.0 / 16.0;
            b.growth_power = 4.0;
            b.growth_R0 = 2.0;
            b.tail_sign = -1;
            out.push_back(b);
            break;
        }
        case ModelKind::Whitham: {
            RadialBranch b;
            ModelDescriptor self = *this;
            b.eval = [self](const Interval& s) { return self.symbol(s); };
            // tanh(s) >= 0.76 for s >= 1, so m_T(s) >= sqrt(0.76 T s); half of it
            // survives subtracting c once sqrt(0.76 T s) >= 2c.
            Interval T = param("T"), c = iv_abs(param("c"));
            Interval k = Interval(0.76) * Interval(T.lo());
            b.growth_coef = (Interval(0.5) * iv_sqrt(k)).lo();
            b.growth_power = 0.5;
            b.growth_R0 = std::max(1.0, (Interval(4.0) * sqr(Interval(c.hi())) / k).hi());
            b.tail_sign = 1;
            out.push_back(b);
            break;
        }
        case ModelKind::Polynomial: {
            RadialBranch b;
            ModelDescriptor self = *this;
            b.eval = [self](const Interval& s) { return self.symbol(s); };
            size_t K = poly_symbol.size();
            while (K > 0 && poly_symbol[K - 1] == Interval(0.0)) --K;
            if (K <= 1) {
                b.constant = true;
                out.push_back(b);
                break;
            }
            const Interval& lead = poly_symbol[K - 1];
            if (lead.contains_zero()) throw InvalidParameter("leading symbol coefficient must have a sign");
            Interval rest(0.0);
            for (size_t j = 0; j + 1 < K; ++j) rest += Interval(poly_symbol[j].mag());
            Interval lm(lead.mig());
            b.growth_coef = (Interval(0.5) * lm).lo();
            b.growth_power = 2.0 * static_cast<double>(K - 1);
            b.growth_R0 = std::max(1.0, iv_sqrt(Interval(2.0) * rest / lm).hi());
            b.tail_sign = lead.certainly_positive() ? 1 : -1;
            out.push_back(b);
            break;
        }
        case ModelKind::Constant: {
            RadialBranch b;
            Interval v = param("value");
            b.eval = [v](const Interval&) { return v; };
            b.constant = true;
            out.push_back(b);
            break;
        }
        case ModelKind::GrayScott: {
            Interval l1 = param("lambda1"), l2 = param("lambda2");
            RadialBranch a;
            a.eval = [l1](const Interval& s) { return -l1 * sqr(s) - Interval(1.0); };
            a.growth_coef = l1.lo();
            a.growth_power = 2.0;
            a.tail_sign = -1;
            RadialBranch d;
            d.eval = [l2](const Interval& s) { return -sqr(s) - l2; };
            d.growth_coef = 1.0;
            d.growth_power = 2.0;
            d.tail_sign = -1;
            out.push_back(a);
            out.push_back(d);
            break;
        }
    }
    return out;
}

int ModelDescriptor::degree() const {
    int d = 1;
    for (const auto& t : nonlinearity) d = std::max(d, t.degree);
    return d;
}

FourierSeq ModelDescriptor::dg_kernel(const FourierSeq& U0) const {
    if (components != 1) throw UnsupportedModel(name + ": the Fourier pipeline handles scalar equations only");
    std::optional<FourierSeq> K;
    for (const auto& t : nonlinearity) {
        if (t.degree < 2) throw InvalidParameter("nonlinearity terms must have degree >= 2");
        FourierSeq p = U0;
        for (int j = 2; j < t.degree; ++j) p = conv(p, U0);
        FourierSeq term = scale(p, Interval(static_cast<double>(t.degree)) * t.coef);
        K = K ? *K + term : term;
    }
    if (!K) return FourierSeq(U0.grid(), sector_product(U0.sector(), U0.sector()), 0);
    return *K;
}

Interval ModelDescriptor::lipschitz_per_r0(const Interval& U0_ell1, const Interval& r0) const {
    if (components != 1) throw UnsupportedModel("use gray_scott_lipschitz_per_r0 for systems");
    if (nonlinearity.empty()) return Interval(0.0);
    Interval kap = kappa_value();
    Interval A(U0_ell1.hi()), h = kap * Interval(r0.hi());
    Interval total(0.0);
    for (const auto& t : nonlinearity) {
        int p = t.degree - 1;
        // ((A + h)^p - A^p) / h expanded so that r0 = 0 is allowed
        Interval acc(0.0), binom(1.0);
        for (int i = 1; i <= p; ++i) {
            binom = binom * Interval(static_cast<double>(p - i + 1)) / Interval(static_cast<double>(i));
            acc += binom * pow(A, p - i) * pow(h, i - 1);
        }
        total += Interval(static_cast<double>(t.degree)) * iv_abs(t.coef) * kap * acc;
    }
    return Interval(0.0, total.hi());
}

Interval gray_scott_lipschitz_per_r0(const ModelDescriptor& model, const Interval& u01_inf, const Interval& u02_inf,
                                     const Interval& r0, const Interval& lambda) {
    if (model.kind != ModelKind::GrayScott) throw InvalidParameter("not a Gray-Scott model");
    Interval kap = model.kappa_value(), l1 = model.param("lambda1"), l2 = model.param("lambda2");
    Interval kr = kap * r0;
    Interval a1 = Interval(2.0) * (Interval(1.0) + u02_inf + kr) + Interval(3.0) * l1 * (Interval(2.0) * u01_inf + kr);
    Interval a2 = Interval(2.0) * u01_inf;
    Interval coupling = iv_abs(l1 * l2 - Interval(1.0)) / iv_abs(l2 + lambda) * (u01_inf + kr);
    return max(a2, a1 + coupling) * kap;
}

Interval ModelDescriptor::kappa_value() const {
    if (!kappa) throw InvalidParameter(name + ": embedding constant kappa is not available; load it in the model file");
    return *kappa;
}

DecayConstants sh_decay(const Interval& mu, const Interval& lambda, int m) {
    Interval s = mu + lambda;
    if (!s.certainly_positive()) throw DecayDomainMismatch("mu + lambda must be positive for the decay bound");
    Interval q = iv_sqrt(Interval(1.0) + s) - Interval(1.0);
    if (m == 2) return {Interval(1.335) / iv_sqrt(s), iv_sqrt(q) / Interval(2.0)};
    // residues at the four roots of (1 - k^2)^2 + s
    Interval C = Interval(1.0) / (Interval(2.0) * iv_sqrt(iv_sqrt(Interval(1.0) + s)) * iv_sqrt(s));
    return {C, iv_sqrt(q / Interval(2.0))};
}

DecayConstants ModelDescriptor::decay(const Interval& lambda) const {
    if (kind == ModelKind::SwiftHohenberg && decay_table.empty()) {
        DecayConstants d = sh_decay(param("mu"), lambda, m);
        return {Interval(d.C.hi()), Interval(d.a.lo())};
    }
    for (const auto& e : decay_table)
        if (e.lambda.contains(lambda)) return {e.C, e.a};
    throw DecayDomainMismatch(name + ": no decay constants cover lambda in [" + shortest_decimal(lambda.lo()) + ", " +
                              shortest_decimal(lambda.hi()) + "]");
}

namespace {

ModelDescriptor finish_scalar(ModelDescriptor md) {
    // kappa from ||1/l||_2 whenever the reciprocal symbol is square integrable
    try {
        Interval l2 = rigorous_L2_of_reciprocal(md);
        Interval f(1.0);
        if (md.kind == ModelKind::SwiftHohenberg) f = max(Interval(1.0), Interval(1.0) / md.param("mu"));
        md.kappa = Interval(0.0, (f * l2).hi());
    } catch (const TailNotIntegrable&) {
    } catch (const DivisionByZeroInterval&) {
    }
    return md;
}

}  // namespace

ModelDescriptor sh_model(const Interval& mu, const Interval& nu1, const Interval& nu2, int m) {
    if (!mu.certainly_positive()) throw InvalidParameter("Swift-Hohenberg needs mu > 0");
    if (m != 1 && m != 2) throw InvalidParameter("dimension must be 1 or 2");
    ModelDescriptor md;
    md.name = "swift_hohenberg";
    md.kind = ModelKind::SwiftHohenberg;
    md.m = m;
    md.params = {{"mu", mu}, {"nu1", nu1}, {"nu2", nu2}};
    // F(u) = -((1 + Laplacian)^2 u + mu u + nu1 u^2 + nu2 u^3)
    md.nonlinearity = {{2, -nu1}, {3, -nu2}};
    return finish_scalar(md);
}

ModelDescriptor whitham_model(const Interval& T, const Interval& c) {
    if (!T.certainly_positive()) throw InvalidParameter("Whitham needs T > 0");
    ModelDescriptor md;
    md.name = "whitham";
    md.kind = ModelKind::Whitham;
    md.m = 1;
    md.params = {{"T", T}, {"c", c}};
    md.nonlinearity = {{2, Interval(1.0)}};
    return md;
}

ModelDescriptor gray_scott_model(const Interval& lambda1, const Interval& lambda2) {
    if (!lambda1.certainly_positive() || !lambda2.certainly_positive())
        throw InvalidParameter("Gray-Scott needs lambda1, lambda2 > 0");
    ModelDescriptor md;
    md.name = "gray_scott";
    md.kind = ModelKind::GrayScott;
    md.m = 2;
    md.components = 2;
    md.self_adjoint = false;
    md.params = {{"lambda1", lambda1}, {"lambda2", lambda2}};
    md.kappa = gray_scott_kappa(md);
    return md;
}

ModelDescriptor constant_model(const Interval& value, int m) {
    ModelDescriptor md;
    md.name = "constant";
    md.kind = ModelKind::Constant;
    md.m = m;
    md.params = {{"value", value}};
    return md;
}

ModelDescriptor polynomial_model(std::vector<Interval> coeffs, std::vector<Monomial> nonlinearity, int m) {
    ModelDescriptor md;
    md.name = "polynomial";
    md.kind = ModelKind::Polynomial;
    md.m = m;
    md.poly_symbol = std::move(coeffs);
    md.nonlinearity = std::move(nonlinearity);
    for (const auto& t : md.nonlinearity)
        if (t.degree < 2) throw InvalidParameter("nonlinearity terms must have degree >= 2");
    md.branches();  // validates the leading coefficient
    return finish_scalar(md);
}

EssentialSpectrum essential_spectrum(const ModelDescriptor& model) {
    EssentialSpectrum es;
    for (const auto& b : model.branches()) {
        RangePiece p;
        if (b.constant) {
            Interval v = b.eval(Interval(0.0));
            p.lo = v;
            p.hi = v;
        } else if (b.tail_sign < 0) {
            p.hi = branch_sup(b);
        } else {
            p.lo = branch_inf(b);
        }
        es.pieces.push_back(p);
    }
    return es;
}

Interval symbol_distance(const ModelDescriptor& model, const ComplexBox& z, double s_from) {
    std::optional<Interval> best;
    for (const auto& b : model.branches()) {
        Interval d = branch_distance(b, z, s_from);
        best = best ? min(*best, d) : d;
    }
    return *best;
}

bool sigma_delta_test(const ModelDescriptor& model, const Interval& delta, const ComplexBox& lambda) {
    if (!delta.certainly_positive()) throw InvalidParameter("delta must be positive");
    try {
        return symbol_distance(model, lambda).lo() > delta.hi();
    } catch (const ConvergenceFailure&) {
        return false;
    }
}

Interval sh_lambda_max(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0) {
    if (model.kind != ModelKind::SwiftHohenberg) throw InvalidParameter("sh_lambda_max needs a Swift-Hohenberg model");
    Interval nu1 = model.param("nu1"), nu2 = model.param("nu2"), mu = model.param("mu");
    FourierSeq V0 = scale(U0, Interval(2.0) * nu1) + scale(conv(U0, U0), Interval(3.0) * nu2);
    Interval v1 = seq_norms(V0).ell1;
    if (r0 == Interval(0.0)) return v1 - mu;
    Interval kr = model.kappa_value() * r0;
    Interval u1 = seq_norms(U0).ell1;
    return v1 + Interval(2.0) * iv_abs(nu1) * kr + Interval(3.0) * iv_abs(nu2) * kr * (Interval(2.0) * u1 + kr) - mu;
}

namespace {

Interval perturbation_bound(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0) {
    Interval k1 = seq_norms(model.dg_kernel(U0)).ell1;
    if (r0 == Interval(0.0)) return k1;
    return k1 + r0 * model.lipschitz_per_r0(seq_norms(U0).ell1, r0);
}

}  // namespace

Interval spectrum_upper_bound(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0) {
    if (model.kind == ModelKind::SwiftHohenberg) return sh_lambda_max(model, U0, r0);
    EssentialSpectrum es = essential_spectrum(model);
    if (es.unbounded_above()) throw InvalidParameter("symbol unbounded above; no upper spectral bound");
    Interval sup_l = es.pieces.front().hi.value();
    for (const auto& p : es.pieces) sup_l = max(sup_l, p.hi.value());
    return sup_l + perturbation_bound(model, U0, r0);
}

Interval spectrum_lower_bound(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0) {
    EssentialSpectrum es = essential_spectrum(model);
    if (es.unbounded_below()) throw InvalidParameter("symbol unbounded below; no lower spectral bound");
    Interval inf_l = es.pieces.front().lo.value();
    for (const auto& p : es.pieces) inf_l = min(inf_l, p.lo.value());
    return inf_l - perturbation_bound(model, U0, r0);
}

Interval rigorous_L2_of_reciprocal(const ModelDescriptor& model, double rel_width) {
    auto bs = model.branches();
    if (bs.size() != 1) throw UnsupportedModel("reciprocal norm needs a scalar symbol");
    const RadialBranch& b = bs.front();
    const int m = model.m;
    if (b.constant || !(2.0 * b.growth_power > m)) throw TailNotIntegrable("1/l is not square integrable on R^m");
    // measure of {xi : |2 pi xi| in ds}: ds/pi in 1D, s ds/(2 pi) in 2D
    const Interval pi_iv = pi();
    auto tail = [&](double R) {
        Interval c2 = sqr(Interval(b.growth_coef));
        Interval e = Interval(2.0 * b.growth_power - m);
        Interval Rp = exp(e * log(Interval(R)));
        Interval denom = (m == 1 ? pi_iv : Interval(2.0) * pi_iv) * c2 * e * Rp;
        return Interval(0.0, (Interval(1.0) / denom).hi());
    };
    auto riemann = [&](double R, int n) {
        Interval acc(0.0);
        for (int i = 0; i < n; ++i) {
            double a = R * i / n, c = i + 1 == n ? R : R * (i + 1) / n;
            Interval box(a, c);
            Interval f2 = sqr(Interval(1.0) / b.eval(box));
            if (m == 2) f2 = f2 * box;
            acc += Interval(c - a) * f2;
        }
        return acc / (m == 1 ? pi_iv : Interval(2.0) * pi_iv);
    };
    double R = std::max(b.growth_R0, 1.0);
    Interval coarse = riemann(R, 256);
    while (tail(R).hi() > 0.1 * rel_width * std::max(coarse.lo(), 1e-300) && R < 1e6) {
        R *= 2.0;
        coarse = riemann(R, 256);
    }
    for (int n = 512; n <= (1 << 22); n *= 2) {
        Interval total = riemann(R, n) + tail(R);
        if (total.width() <= rel_width * total.mid()) return iv_sqrt(total);
    }
    throw ToleranceNotMet("reciprocal norm did not reach the requested width");
}

Interval gray_scott_kappa(const ModelDescriptor& model) {
    Interval l1 = model.param("lambda1"), l2 = model.param("lambda2");
    Interval B = l1 * l2 - Interval(1.0);
    auto frob2 = [=](const Interval& s) {
        Interval A = -l1 * sqr(s) - Interval(1.0), D = -sqr(s) - l2;
        return Interval(1.0) / sqr(A) + Interval(1.0) / sqr(D) + sqr(B) / sqr(A * D);
    };
    Fn neg_sigma = [=](const Interval& s) {
        Interval A = -l1 * sqr(s) - Interval(1.0), D = -sqr(s) - l2;
        Interval F = frob2(s);
        Interval det2 = Interval(1.0) / sqr(A * D);
        Interval disc = iv_sqrt(max(sqr(F) - Interval(4.0) * det2, Interval(0.0)));
        return -iv_sqrt((F + disc) / Interval(2.0));
    };
    double R = 4.0;
    for (int it = 0; it < 40; ++it, R *= 2.0) {
        Interval res = -bb_min(neg_sigma, 0.0, R, 1e-12);
        // Frobenius norm dominates and decreases in s beyond R
        double tail = iv_sqrt(frob2(Interval(R))).hi();
        if (tail <= res.lo()) return res;
    }
    throw ConvergenceFailure("Gray-Scott kappa tail not closed");
}

namespace {

Interval read_iv(const json& j, const char* key) { return interval_from_json(j.at(key)); }

}  // namespace

ModelDescriptor model_from_json(const std::string& text) {
    json j = json::parse(text);
    std::string kind = j.at("model").get<std::string>();
    int m = j.value("m", 1);
    const json& p = j.contains("params") ? j.at("params") : json::object();
    ModelDescriptor md;
    if (kind == "swift_hohenberg") {
        md = sh_model(read_iv(p, "mu"), read_iv(p, "nu1"), read_iv(p, "nu2"), m);
    } else if (kind == "whitham") {
        md = whitham_model(read_iv(p, "T"), read_iv(p, "c"));
    } else if (kind == "gray_scott") {
        md = gray_scott_model(read_iv(p, "lambda1"), read_iv(p, "lambda2"));
    } else if (kind == "constant") {
        md = constant_model(read_iv(p, "value"), m);
    } else if (kind == "polynomial") {
        std::vector<Interval> coeffs;
        for (const auto& c : j.at("symbol_coeffs")) coeffs.push_back(interval_from_json(c));
        std::vector<Monomial> terms;
        if (j.contains("nonlinearity"))
            for (const auto& t : j.at("nonlinearity")) terms.push_back({t.at("degree").get<int>(), read_iv(t, "coef")});
        md = polynomial_model(coeffs, terms, m);
    } else {
        throw FormatError("unknown model kind " + kind);
    }
    if (j.contains("kappa")) md.kappa = interval_from_json(j.at("kappa"));
    if (j.contains("q_multiplier")) md.q_multiplier = j.at("q_multiplier").get<double>();
    if (j.contains("decay"))
        for (const auto& e : j.at("decay"))
            md.decay_table.push_back({read_iv(e, "lambda"), read_iv(e, "C"), read_iv(e, "a")});
    if (j.contains("sectors")) md.sectors = j.at("sectors").get<std::vector<std::string>>();
    return md;
}

ModelDescriptor read_model_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot read model file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return model_from_json(ss.str());
}

std::string model_to_json(const ModelDescriptor& md) {
    static const std::map<ModelKind, std::string> names = {{ModelKind::SwiftHohenberg, "swift_hohenberg"},
                                                           {ModelKind::Whitham, "whitham"},
                                                           {ModelKind::GrayScott, "gray_scott"},
                                                           {ModelKind::Polynomial, "polynomial"},
                                                           {ModelKind::Constant, "constant"}};
    json j;
    j["model"] = names.at(md.kind);
    j["m"] = md.m;
    json p = json::object();
    for (const auto& [k, v] : md.params) p[k] = to_json(v);
    j["params"] = p;
    if (md.kind == ModelKind::Polynomial) {
        json c = json::array();
        for (const auto& x : md.poly_symbol) c.push_back(to_json(x));
        j["symbol_coeffs"] = c;
        json t = json::array();
        for (const auto& mono : md.nonlinearity) t.push_back({{"degree", mono.degree}, {"coef", to_json(mono.coef)}});
        j["nonlinearity"] = t;
    }
    if (md.kappa) j["kappa"] = to_json(*md.kappa);
    j["q_multiplier"] = md.q_multiplier;
    j["self_adjoint"] = md.self_adjoint;
    if (!md.decay_table.empty()) {
        json d = json::array();
        for (const auto& e : md.decay_table)
            d.push_back({{"lambda", to_json(e.lambda)}, {"C", to_json(e.C)}, {"a", to_json(e.a)}});
        j["decay"] = d;
    }
    if (!md.sectors.empty()) j["sectors"] = md.sectors;
    return j.dump(2);
}

}  // namespace spectral
