#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectral/fourier.hpp"
#include "spectral/imatrix.hpp"
#include "spectral/model.hpp"

namespace spectral {

struct ApproximateSolution {
    FourierSeq U0;
    Interval r0;
};

// s = |2 pi n / (2d)| for a full-grid index, as a box.
Interval radial_frequency(const GridSpec& grid, const Index& n);
Interval symbol_at(const ModelDescriptor& model, const GridSpec& grid, const Index& n);

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 30;
};
struct NewtonResult {
    FourierSeq U0;
    int iterations = 0;
    double residual = 0.0;         // floating point l2 norm of pi^N F(U0)
    Interval residual_enclosure;   // the same norm recomputed with intervals
};
// Plain Newton on pi^N F = 0 with FFT products. Not a proof of anything.
NewtonResult newton_solve(const ModelDescriptor& model, const FourierSeq& seed, const NewtonOptions& opt = {});
// Floating point residual pi^N F(U), stored coordinates.
std::vector<double> newton_residual(const ModelDescriptor& model, const FourierSeq& U);

// Matrix of L + DG(U0) on a sector in orthonormal coordinates
// c_n = sqrt(|O_n|) u_n, restricted to rows and columns in I^radius.
IMatrix assemble_band(const ModelDescriptor& model, const FourierSeq& U0, const Sector& sector, int radius);

// Linearization split into the three index regimes used by the radii:
// I^N, the ring I^{N+M} \ I^N (M the kernel radius) and the far tail.
struct Jacobian {
    GridSpec grid;
    Sector sector;
    bool finite = false;  // finite truncation: no ring, no tail
    bool self_adjoint = false;
    std::vector<Index> in_idx, ring_idx;
    std::vector<Interval> in_symbol, ring_symbol;  // l(n~)
    IMatrix A_in;       // in x in
    IMatrix A_in_ring;  // in x ring
    IMatrix A_ring_in;  // ring x in
    std::vector<ComplexBox> ring_diag;
    std::vector<Interval> ring_offdiag;  // sum over k outside I^N, k != n, of |A_nk|
    int kernel_radius = 0;
    Interval kernel_ell1;  // ||K||_1 over the full grid
    Interval kernel_K0;
    Interval refl;         // bound on reflected diagonal terms in the tail
    Interval tail_radius;  // Gershgorin radius of every tail row
    double tail_s_from = 0.0;  // tail rows have s >= this
    double out_s_from = 0.0;   // rows outside I^N have s >= this
    std::optional<ModelDescriptor> model;

    size_t n_in() const { return in_idx.size(); }
    size_t n_ring() const { return ring_idx.size(); }
};

// U0 must lie in an all-even or full sector; the operator acts on `sector`.
Jacobian assemble_jacobian(const ModelDescriptor& model, const FourierSeq& U0, const Sector& sector);
// Finite-truncation mode: every index is in regime (i).
Jacobian jacobian_from_matrix(const IMatrix& A);

struct PseudoDiag {
    IMatrix PN, PN_inv;
    Interval PN_inv_defect;
    Interval PN_norm, PN_inv_norm;
    double condition = 1.0;
    IMatrix D_in;            // (P^N)^-1 A_in P^N
    IMatrix Pinv_A_in_ring;  // (P^N)^-1 A_in_ring
    IMatrix A_ring_in_P;     // A_ring_in P^N
    std::vector<ComplexBox> lambda;  // diag(D_in)
    ComplexBox t;
    bool S_plus_t_invertible = false;
};

constexpr double kDegenerateCondition = 1e8;

// Default shift: t = -(max Re lambda + margin) when the symbol is unbounded
// below, t = -(min Re lambda - margin) otherwise.
PseudoDiag build_pseudo_diag(const Jacobian& jac, std::optional<ComplexBox> t = std::nullopt, double margin = 1.0);

struct Disk {
    ComplexBox center;
    Interval radius;
    Index index{0, 0};
    int region = 0;  // 0: I^N, 1: ring
};

// Far-tail disks: centers c = l(s) + K0 for s >= s_from, radius
// radius + eps_factor * |c + t| (eps_factor is zero before inflation).
struct TailFamily {
    bool present = false;
    double s_from = 0.0;
    Interval center_shift;
    Interval radius;
    Interval eps_factor{0.0};
    ComplexBox t{0.0};
};

struct Cluster {
    std::vector<size_t> members;  // positions in DiskSet::disks
    bool touches_tail = false;
    ComplexBox hull;
    int multiplicity() const { return static_cast<int>(members.size()); }
};

struct DiskSet {
    std::vector<Disk> disks;
    std::vector<Cluster> clusters;
    TailFamily tail;
    std::optional<ModelDescriptor> model;  // needed for tail geometry
};

DiskSet gershgorin_radii(const PseudoDiag& pd, const Jacobian& jac);

// Conservative disk overlap: uncertain cases count as overlapping.
bool disks_overlap(const Disk& a, const Disk& b);
// Could disk d meet some member of the tail family?
bool touches_tail(const Disk& d, const TailFamily& tail, const ModelDescriptor* model);
DiskSet cluster_disks(DiskSet ds);

nlohmann::json disks_to_json(const DiskSet& ds);

}  // namespace spectral
