#include "spectral/finite_spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <mutex>
#include <numeric>

#include "spectral/json_io.hpp"

namespace spectral {

using cd = std::complex<double>;

Interval radial_frequency(const GridSpec& grid, const Index& n) {
    double q = static_cast<double>(n[0]) * n[0];
    if (grid.m == 2) q += static_cast<double>(n[1]) * n[1];
    // n1^2 + n2^2 is exact for the index ranges in use
    return pi() * iv_sqrt(Interval(q)) / Interval(grid.d);
}

Interval symbol_at(const ModelDescriptor& model, const GridSpec& grid, const Index& n) {
    return model.symbol(radial_frequency(grid, n));
}

namespace {

std::mutex fftw_plan_mutex;

int fft_size(int need) {
    int L = 8;
    while (L < need) L *= 2;
    return L;
}

// Physical-space products of a real-coefficient sequence on an L^m grid.
class FftWork {
public:
    FftWork(int m, int L) : m_(m), L_(L), total_(m == 1 ? L : L * L), buf_(total_) {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
        if (m == 1) {
            fwd_ = fftw_plan_dft_1d(L, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_1d(L, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            fwd_ = fftw_plan_dft_2d(L, L, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_2d(L, L, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }
    ~FftWork() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftWork(const FftWork&) = delete;
    FftWork& operator=(const FftWork&) = delete;

    size_t slot(const Index& n) const {
        size_t i = static_cast<size_t>(((n[0] % L_) + L_) % L_);
        if (m_ == 2) i = i * L_ + static_cast<size_t>(((n[1] % L_) + L_) % L_);
        return i;
    }

    // coefficients -> values at grid points
    std::vector<cd> synth(const std::vector<std::pair<Index, double>>& coeffs) {
        std::fill(buf_.begin(), buf_.end(), cd(0.0));
        for (const auto& [n, v] : coeffs) buf_[slot(n)] += v;
        fftw_execute(bwd_);
        return buf_;
    }
    // values -> coefficient array (normalized)
    void analyse(const std::vector<cd>& vals) {
        buf_ = vals;
        fftw_execute(fwd_);
        double s = 1.0 / static_cast<double>(total_);
        for (auto& x : buf_) x *= s;
    }
    double coeff(const Index& n) const { return buf_[slot(n)].real(); }

private:
    int m_, L_;
    size_t total_;
    std::vector<cd> buf_;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

std::vector<std::pair<Index, double>> full_grid_mid(const FourierSeq& u) {
    std::vector<std::pair<Index, double>> out;
    for (size_t i = 0; i < u.size(); ++i) {
        double v = u.coeffs()[i].mid();
        if (v == 0.0) continue;
        for (const auto& [q, s] : u.sector().orbit(u.indices()[i])) out.push_back({q, s * v});
    }
    return out;
}


std::vector<double> symbol_mids(const ModelDescriptor& model, const FourierSeq& U) {
    std::vector<double> l(U.size());
    for (size_t i = 0; i < U.size(); ++i) l[i] = symbol_at(model, U.grid(), U.indices()[i]).mid();
    return l;
}

// Evaluates pi^N F(U). With want_kernel the work buffer is left holding the
// coefficients of the kernel of DG(U).
std::vector<double> eval_F(const ModelDescriptor& model, const FourierSeq& U, const std::vector<double>& l,
                           FftWork& work, bool want_kernel) {
    auto vals = work.synth(full_grid_mid(U));
    std::vector<cd> g(vals.size(), cd(0.0)), k(vals.size(), cd(0.0));
    for (size_t p = 0; p < vals.size(); ++p) {
        for (const auto& t : model.nonlinearity) {
            double c = t.coef.mid();
            g[p] += c * std::pow(vals[p], t.degree);
            k[p] += c * t.degree * std::pow(vals[p], t.degree - 1);
        }
    }
    work.analyse(g);
    std::vector<double> F(U.size());
    for (size_t i = 0; i < U.size(); ++i) F[i] = l[i] * U.coeffs()[i].mid() + work.coeff(U.indices()[i]);
    if (want_kernel) work.analyse(k);
    return F;
}

double weighted_norm(const FourierSeq& U, const std::vector<double>& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += U.sector().orbit_size(U.indices()[i]) * v[i] * v[i];
    return std::sqrt(s);
}

void check_operator_sector(const FourierSeq& U0, const Sector& sector) {
    const Sector& us = U0.sector();
    if (us.m != sector.m) throw SectorMismatch("sector dimension differs from the solution");
    for (int a = 0; a < us.m; ++a)
        if (us.axis[a] == Parity::Odd) throw SectorMismatch("solution must be even in every axis or unrestricted");
    if (us.is_full() && !sector.is_full())
        throw SectorMismatch("an unrestricted solution only supports the full sector");
}

// Nonzero full-grid kernel entries.
std::vector<std::pair<Index, Interval>> kernel_entries(const FourierSeq& K) {
    std::vector<std::pair<Index, Interval>> out;
    const int R = K.radius();
    const int m = K.grid().m;
    for (int i = -R; i <= R; ++i) {
        for (int j = (m == 2 ? -R : 0); j <= (m == 2 ? R : 0); ++j) {
            Index q{i, j};
            Interval v = K.at(q);
            if (v.lo() == 0.0 && v.hi() == 0.0) continue;
            out.push_back({q, v});
        }
    }
    return out;
}

// Sparse row n of the sector operator (without the symbol), orthonormal coordinates.
std::map<Index, Interval> operator_row(const Sector& sector, const Index& n,
                                       const std::vector<std::pair<Index, Interval>>& kern) {
    std::map<Index, Interval> row;
    const int on = sector.orbit_size(n);
    for (const auto& [j, kj] : kern) {
        Index q{n[0] - j[0], sector.m == 2 ? n[1] - j[1] : 0};
        auto [k, s] = sector.canonical(q);
        if (s == 0) continue;
        Interval v = s > 0 ? kj : -kj;
        auto it = row.find(k);
        if (it == row.end())
            row.emplace(k, v);
        else
            it->second += v;
    }
    for (auto& [k, v] : row) {
        int ok = sector.orbit_size(k);
        if (ok != on) v = v * iv_sqrt(Interval(static_cast<double>(on)) / Interval(static_cast<double>(ok)));
    }
    return row;
}

std::map<Index, size_t> position_map(const std::vector<Index>& idx) {
    std::map<Index, size_t> m;
    for (size_t i = 0; i < idx.size(); ++i) m.emplace(idx[i], i);
    return m;
}

}  // namespace

std::vector<double> newton_residual(const ModelDescriptor& model, const FourierSeq& U) {
    FftWork work(U.grid().m, fft_size((model.degree() + 1) * U.radius() + 2));
    return eval_F(model, U, symbol_mids(model, U), work, false);
}

NewtonResult newton_solve(const ModelDescriptor& model, const FourierSeq& seed, const NewtonOptions& opt) {
    if (model.components != 1) throw UnsupportedModel("Newton handles scalar models only");
    seed.grid().validate();
    if (seed.radius() != seed.grid().N) throw GridMismatch("seed must be stored on I^N");
    FourierSeq U = seed;
    const auto l = symbol_mids(model, U);
    const int R = U.radius();
    const int deg = model.degree();
    FftWork work(U.grid().m, fft_size((deg + 1) * R + 2));
    const Sector& sec = U.sector();
    const size_t n = U.size();
    NewtonResult res;
    for (int it = 0;; ++it) {
        auto F = eval_F(model, U, l, work, true);
        res.residual = weighted_norm(U, F);
        res.iterations = it;
        if (res.residual < opt.tol) break;
        if (it >= opt.max_iter) throw NoConvergence("Newton stopped at residual " + shortest_decimal(res.residual));
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        for (size_t r = 0; r < n; ++r) {
            const Index& nr = U.indices()[r];
            J(r, r) += l[r];
            for (size_t c = 0; c < n; ++c) {
                for (const auto& [q, s] : sec.orbit(U.indices()[c]))
                    J(r, c) += s * work.coeff({nr[0] - q[0], nr[1] - q[1]});
            }
        }
        Eigen::VectorXd rhs = Eigen::Map<Eigen::VectorXd>(F.data(), n);
        Eigen::VectorXd step = J.fullPivLu().solve(rhs);
        if (!step.allFinite()) throw NoConvergence("singular Newton Jacobian");
        for (size_t i = 0; i < n; ++i) U.coeffs()[i] = Interval(U.coeffs()[i].mid() - step[i]);
    }
    // interval recomputation of the residual
    std::optional<FourierSeq> G;
    for (const auto& t : model.nonlinearity) {
        FourierSeq p = U;
        for (int j = 1; j < t.degree; ++j) p = conv(p, U);
        FourierSeq term = scale(p, t.coef);
        G = G ? *G + term : term;
    }
    FourierSeq F(U.grid(), U.sector(), R);
    for (size_t i = 0; i < n; ++i) {
        Interval v = symbol_at(model, U.grid(), U.indices()[i]) * U.coeffs()[i];
        if (G) v += G->at(U.indices()[i]);
        F.coeffs()[i] = v;
    }
    res.residual_enclosure = seq_norms(F).ell2;
    res.U0 = U;
    return res;
}

IMatrix assemble_band(const ModelDescriptor& model, const FourierSeq& U0, const Sector& sector, int radius) {
    check_operator_sector(U0, sector);
    const GridSpec& g = U0.grid();
    auto kern = kernel_entries(model.dg_kernel(U0));
    auto idx = stored_indices(sector, radius);
    auto pos = position_map(idx);
    IMatrix A(idx.size(), idx.size());
    for (size_t r = 0; r < idx.size(); ++r) {
        for (const auto& [k, v] : operator_row(sector, idx[r], kern)) {
            auto it = pos.find(k);
            if (it != pos.end()) A(r, it->second) = ComplexBox(v);
        }
        A(r, r) = ComplexBox(A(r, r).re + symbol_at(model, g, idx[r]));
    }
    return A;
}

Jacobian assemble_jacobian(const ModelDescriptor& model, const FourierSeq& U0, const Sector& sector) {
    check_operator_sector(U0, sector);
    Jacobian jac;
    jac.grid = U0.grid();
    jac.sector = sector;
    jac.model = model;
    const int N = jac.grid.N;
    if (U0.radius() > N) throw GridMismatch("U0 must be supported in I^N");
    FourierSeq K = model.dg_kernel(U0);
    auto kern = kernel_entries(K);
    const int M = K.radius();
    jac.kernel_radius = M;
    jac.in_idx = stored_indices(sector, N);
    for (const auto& n : stored_indices(sector, N + M))
        if (sup_norm(n, jac.grid.m) > N) jac.ring_idx.push_back(n);
    auto in_pos = position_map(jac.in_idx);
    auto ring_pos = position_map(jac.ring_idx);
    const size_t ni = jac.n_in(), nr = jac.n_ring();
    jac.A_in = IMatrix(ni, ni);
    jac.A_in_ring = IMatrix(ni, nr);
    jac.A_ring_in = IMatrix(nr, ni);
    for (size_t r = 0; r < ni; ++r) {
        const Index& n = jac.in_idx[r];
        jac.in_symbol.push_back(symbol_at(model, jac.grid, n));
        for (const auto& [k, v] : operator_row(sector, n, kern)) {
            if (auto it = in_pos.find(k); it != in_pos.end())
                jac.A_in(r, it->second) = ComplexBox(v);
            else if (auto jt = ring_pos.find(k); jt != ring_pos.end())
                jac.A_in_ring(r, jt->second) = ComplexBox(v);
            else
                throw GridMismatch("kernel reaches past the ring");
        }
        jac.A_in(r, r) = ComplexBox(jac.A_in(r, r).re + jac.in_symbol[r]);
    }
    for (size_t r = 0; r < nr; ++r) {
        const Index& n = jac.ring_idx[r];
        Interval l = symbol_at(model, jac.grid, n);
        jac.ring_symbol.push_back(l);
        Interval diag = l, off(0.0);
        for (const auto& [k, v] : operator_row(sector, n, kern)) {
            if (k == n)
                diag += v;
            else if (auto it = in_pos.find(k); it != in_pos.end())
                jac.A_ring_in(r, it->second) = ComplexBox(v);
            else
                off += iv_abs(v);
        }
        jac.ring_diag.emplace_back(diag);
        jac.ring_offdiag.push_back(off);
    }
    // far tail
    jac.kernel_ell1 = seq_norms(K).ell1;
    jac.kernel_K0 = K.at({0, 0});
    Interval refl(0.0);
    if (jac.grid.m == 2 && !sector.is_full()) {
        // a reflection of axis a puts K at (2 n_a on reflected axes, 0 elsewhere) on the diagonal
        for (int mask = 1; mask < 4; ++mask) {
            double best = 0.0;
            for (const auto& [j, kj] : kern) {
                bool ok = true;
                for (int a = 0; a < 2; ++a) {
                    bool reflected = mask & (1 << a);
                    if (reflected ? (j[a] == 0 || j[a] % 2 != 0) : j[a] != 0) ok = false;
                }
                if (ok) best = std::max(best, kj.mag());
            }
            refl += Interval(best);
        }
    }
    jac.refl = refl;
    Interval ratio = iv_sqrt(Interval(static_cast<double>(sector.tail_orbit_ratio())));
    Interval off = max(jac.kernel_ell1 - iv_abs(jac.kernel_K0), Interval(0.0));
    jac.tail_radius = Interval(0.0, (ratio * off + refl).hi());
    jac.tail_s_from = (pi() * Interval(static_cast<double>(N + M + 1)) / Interval(jac.grid.d)).lo();
    jac.out_s_from = (pi() * Interval(static_cast<double>(N + 1)) / Interval(jac.grid.d)).lo();
    jac.self_adjoint = model.self_adjoint;
    if (U0.sector().is_full()) {
        // symmetric only when the kernel is even
        for (const auto& [j, kj] : kern) {
            Index mj{-j[0], -j[1]};
            if (!(K.at(mj) == kj)) jac.self_adjoint = false;
        }
    }
    return jac;
}

Jacobian jacobian_from_matrix(const IMatrix& A) {
    if (A.rows() != A.cols()) throw DimensionMismatch("square matrix expected");
    Jacobian jac;
    jac.finite = true;
    jac.A_in = A;
    jac.A_in_ring = IMatrix(A.rows(), 0);
    jac.A_ring_in = IMatrix(0, A.rows());
    for (size_t i = 0; i < A.rows(); ++i) {
        jac.in_idx.push_back({static_cast<int>(i), 0});
        jac.in_symbol.push_back(A(i, i).re);
    }
    jac.kernel_ell1 = jac.kernel_K0 = jac.refl = jac.tail_radius = Interval(0.0);
    bool sym = A.is_real();
    for (size_t i = 0; sym && i < A.rows(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (!(A(i, j).re == A(j, i).re)) {
                sym = false;
                break;
            }
    jac.self_adjoint = sym;
    return jac;
}

PseudoDiag build_pseudo_diag(const Jacobian& jac, std::optional<ComplexBox> t, double margin) {
    const size_t n = jac.n_in();
    PseudoDiag pd;
    Eigen::MatrixXcd Amid = jac.A_in.mid();
    Eigen::MatrixXcd V(n, n);
    std::vector<cd> ev(n);
    if (jac.A_in.is_real() && Amid.isApprox(Amid.adjoint(), 0.0)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Amid.real());
        if (es.info() != Eigen::Success) throw ConvergenceFailure("symmetric eigensolver failed");
        V = es.eigenvectors().cast<cd>();
        for (size_t i = 0; i < n; ++i) ev[i] = es.eigenvalues()[i];
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Amid);
        if (es.info() != Eigen::Success) throw ConvergenceFailure("eigensolver failed");
        V = es.eigenvectors();
        for (size_t i = 0; i < n; ++i) ev[i] = es.eigenvalues()[i];
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return ev[a].real() != ev[b].real() ? ev[a].real() < ev[b].real() : ev[a].imag() < ev[b].imag();
    });
    Eigen::MatrixXcd P(n, n);
    for (size_t c = 0; c < n; ++c) {
        Eigen::VectorXcd v = V.col(order[c]);
        v /= v.norm();
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < v.size(); ++i)
            if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
        if (v.size() > 0) v *= std::conj(v[arg]) / std::abs(v[arg]);
        if (jac.A_in.is_real() && v.imag().norm() <= 1e-13 * v.norm()) v = v.real().cast<cd>();
        P.col(c) = v;
    }
    if (n > 0) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(P);
        const auto& sv = svd.singularValues();
        pd.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
        if (!(pd.condition <= kDegenerateCondition))
            throw DegenerateEigenbasis("eigenvector matrix condition " + shortest_decimal(pd.condition) +
                                       " exceeds 1e8; increase N or perturb the parameters");
    }
    pd.PN = IMatrix(P);
    if (P.imag().isZero(0.0)) pd.PN = IMatrix(Eigen::MatrixXd(P.real()));
    InverseEnclosure inv = verified_inverse(pd.PN);
    pd.PN_inv = inv.inverse;
    pd.PN_inv_defect = inv.defect;
    pd.PN_norm = op_norm2_bound(pd.PN);
    pd.PN_inv_norm = op_norm2_bound(pd.PN_inv);
    pd.D_in = pd.PN_inv * (jac.A_in * pd.PN);
    pd.Pinv_A_in_ring = pd.PN_inv * jac.A_in_ring;
    pd.A_ring_in_P = jac.A_ring_in * pd.PN;
    for (size_t i = 0; i < n; ++i) {
        ComplexBox l = pd.D_in(i, i);
        if (jac.self_adjoint) l.im = hull(l.im, Interval(0.0));
        pd.lambda.push_back(l);
    }
    if (t) {
        pd.t = *t;
    } else {
        bool below = true;
        if (jac.model && !jac.finite) below = essential_spectrum(*jac.model).unbounded_below();
        double ext = below ? -INFINITY : INFINITY;
        for (const auto& l : pd.lambda) ext = below ? std::max(ext, l.re.hi()) : std::min(ext, l.re.lo());
        for (const auto& l : jac.ring_diag) ext = below ? std::max(ext, l.re.hi()) : std::min(ext, l.re.lo());
        if (!std::isfinite(ext)) ext = 0.0;
        pd.t = ComplexBox(-(Interval(ext) + Interval(below ? margin : -margin)));
    }
    bool ok = true;
    for (const auto& l : pd.lambda) ok = ok && abs(l + pd.t).lo() > 0.0;
    for (const auto& l : jac.ring_diag) ok = ok && abs(l + pd.t).lo() > 0.0;
    pd.S_plus_t_invertible = ok;
    return pd;
}

DiskSet gershgorin_radii(const PseudoDiag& pd, const Jacobian& jac) {
    DiskSet ds;
    ds.model = jac.model;
    const size_t ni = jac.n_in();
    for (size_t r = 0; r < ni; ++r) {
        Interval rad(0.0);
        for (size_t c = 0; c < ni; ++c)
            if (c != r) rad += abs(pd.D_in(r, c));
        for (size_t c = 0; c < jac.n_ring(); ++c) rad += abs(pd.Pinv_A_in_ring(r, c));
        ds.disks.push_back({pd.lambda[r], Interval(0.0, rad.hi()), jac.in_idx[r], 0});
    }
    for (size_t r = 0; r < jac.n_ring(); ++r) {
        Interval rad = jac.ring_offdiag[r];
        for (size_t c = 0; c < ni; ++c) rad += abs(pd.A_ring_in_P(r, c));
        ComplexBox center = jac.ring_diag[r];
        if (jac.self_adjoint) center.im = hull(center.im, Interval(0.0));
        ds.disks.push_back({center, Interval(0.0, rad.hi()), jac.ring_idx[r], 1});
    }
    if (!jac.finite) {
        ds.tail.present = true;
        ds.tail.s_from = jac.tail_s_from;
        ds.tail.center_shift = jac.kernel_K0;
        ds.tail.radius = jac.tail_radius;
    }
    return ds;
}

bool disks_overlap(const Disk& a, const Disk& b) {
    return abs(a.center - b.center).lo() <= (a.radius + b.radius).hi();
}

namespace {

// Real hull of the tail centres l(s) + shift, per branch.
struct TailHull {
    double lo = -INFINITY, hi = INFINITY;
};

std::vector<TailHull> tail_hulls(const TailFamily& tail, const ModelDescriptor& model) {
    std::vector<TailHull> out;
    for (const auto& b : model.branches()) {
        TailHull h;
        if (b.constant) {
            Interval v = b.eval(Interval(0.0));
            h = {v.lo(), v.hi()};
        } else if (b.tail_sign < 0) {
            h.hi = branch_sup(b, tail.s_from).hi();
        } else {
            h.lo = branch_inf(b, tail.s_from).lo();
        }
        if (std::isfinite(h.lo)) h.lo = (Interval(h.lo) + tail.center_shift).lo();
        if (std::isfinite(h.hi)) h.hi = (Interval(h.hi) + tail.center_shift).hi();
        out.push_back(h);
    }
    return out;
}

// Disk B(c, r) meets B(c', r_t + X |c' + t|) only if
// (1 - X) |c - c'| <= r + r_t + X |c + t|.
bool touches_tail_impl(const Disk& d, const TailFamily& tail, const ModelDescriptor& model,
                       const std::vector<TailHull>& hulls) {
    const Interval X = tail.eps_factor;
    if (!(X.hi() < 1.0)) return true;
    Interval reach = (d.radius + tail.radius + X * abs(d.center + tail.t)) / (Interval(1.0) - X);
    const double thr = reach.hi();
    bool any = false;
    for (const auto& h : hulls) {
        double dx = std::max({0.0, d.center.re.lo() - h.hi, h.lo - d.center.re.hi()});
        double dist_lb = std::max(dx, d.center.im.mig());
        if (!(dist_lb > thr)) any = true;
    }
    if (!any) return false;
    try {
        ComplexBox z = d.center - ComplexBox(tail.center_shift);
        for (const auto& b : model.branches())
            if (branch_distance(b, z, tail.s_from).lo() <= thr) return true;
        return false;
    } catch (const ConvergenceFailure&) {
        return true;
    }
}

}  // namespace

bool touches_tail(const Disk& d, const TailFamily& tail, const ModelDescriptor* model) {
    if (!tail.present) return false;
    if (!model) return true;
    return touches_tail_impl(d, tail, *model, tail_hulls(tail, *model));
}

DiskSet cluster_disks(DiskSet ds) {
    const size_t n = ds.disks.size();
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    // sweep over the real extent keeps the pair test local
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> left(n), right(n);
    for (size_t i = 0; i < n; ++i) {
        left[i] = (ds.disks[i].center.re - ds.disks[i].radius).lo();
        right[i] = (ds.disks[i].center.re + ds.disks[i].radius).hi();
    }
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return left[a] != left[b] ? left[a] < left[b] : a < b; });
    for (size_t ii = 0; ii < n; ++ii) {
        size_t a = order[ii];
        for (size_t jj = ii + 1; jj < n; ++jj) {
            size_t b = order[jj];
            if (left[b] > right[a]) break;
            if (disks_overlap(ds.disks[a], ds.disks[b])) {
                size_t ra = find(a), rb = find(b);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
    }
    std::map<size_t, Cluster> groups;
    for (size_t i = 0; i < n; ++i) groups[find(i)].members.push_back(i);
    std::vector<TailHull> hulls;
    if (ds.tail.present && ds.model) hulls = tail_hulls(ds.tail, *ds.model);
    ds.clusters.clear();
    for (auto& [root, c] : groups) {
        (void)root;
        const Disk& d0 = ds.disks[c.members.front()];
        c.hull = ComplexBox(hull(d0.center.re - d0.radius, d0.center.re + d0.radius),
                            hull(d0.center.im - d0.radius, d0.center.im + d0.radius));
        for (size_t i : c.members) {
            const Disk& d = ds.disks[i];
            c.hull = hull(c.hull, ComplexBox(hull(d.center.re - d.radius, d.center.re + d.radius),
                                             hull(d.center.im - d.radius, d.center.im + d.radius)));
            if (ds.tail.present && !c.touches_tail)
                c.touches_tail = ds.model ? touches_tail_impl(d, ds.tail, *ds.model, hulls) : true;
        }
        ds.clusters.push_back(c);
    }
    std::sort(ds.clusters.begin(), ds.clusters.end(), [](const Cluster& a, const Cluster& b) {
        return a.hull.re.lo() != b.hull.re.lo() ? a.hull.re.lo() < b.hull.re.lo() : a.members < b.members;
    });
    return ds;
}

nlohmann::json disks_to_json(const DiskSet& ds) {
    using nlohmann::json;
    json disks = json::array();
    for (const auto& d : ds.disks) {
        json idx = json::array({d.index[0]});
        if (ds.model && ds.model->m == 2) idx.push_back(d.index[1]);
        disks.push_back({{"index", idx},
                         {"region", d.region == 0 ? "inner" : "ring"},
                         {"center", to_json(d.center)},
                         {"radius", to_json(d.radius)}});
    }
    json clusters = json::array();
    for (const auto& c : ds.clusters) {
        json members = json::array();
        for (size_t i : c.members) members.push_back(i);
        clusters.push_back({{"members", members},
                            {"multiplicity", c.multiplicity()},
                            {"touches_tail", c.touches_tail},
                            {"hull", to_json(c.hull)}});
    }
    json tail = {{"present", ds.tail.present}};
    if (ds.tail.present) {
        tail["s_from"] = endpoint_json(ds.tail.s_from);
        tail["center_shift"] = to_json(ds.tail.center_shift);
        tail["radius"] = to_json(ds.tail.radius);
        tail["eps_factor"] = to_json(ds.tail.eps_factor);
        tail["t"] = to_json(ds.tail.t);
        tail["rule"] = "centers symbol(s) + center_shift for s >= s_from, radius + eps_factor |center + t|";
    }
    return {{"schema", "spectral-disks"}, {"version", 1}, {"disks", disks}, {"clusters", clusters}, {"tail", tail}};
}

}  // namespace spectral
