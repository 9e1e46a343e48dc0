#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectral/finite_spectrum.hpp"

namespace spectral {

// Region where eigenvalues are counted. Self-adjoint runs use a real segment
// (im = [0, 0]); clusters are then judged by their real projections.
struct JordanDomain {
    Interval re;
    Interval im{0.0};
    Interval delta{0.0};  // certified: J lies at distance >= delta from the symbol range
    bool is_real() const { return im.lo() == 0.0 && im.hi() == 0.0; }
};

struct ConditionCheck {
    std::string name;
    Interval value;  // the quantity required to be positive (or below 1, see name)
    bool ok = false;
};

struct HomotopyBounds {
    Interval rho;        // point of J nearest to the symbol range
    Interval dist_rho;   // distance from rho to the symbol range
    Interval Z11, Z12, Z13, Z14;
    Interval Zu1, Zu2, Zu3;
    Interval Zu1_q, Zu2_q, Zu3_q;
    Interval C1, C2;
    Interval kappa1, kappa2, kappa_q;
    Interval PN_norm;
    Interval FN;   // ||(S_N + t)^{-1} (P^N)^{-1} (L_N - rho)||
    Interval sJ;   // sup over mu in J of |l - mu| / |l - rho| on I^N
    Interval lipschitz;  // ||DG(u0) - DG(u)|| per unit r0
    Interval r0;
    DecayConstants decay;
    std::vector<ConditionCheck> conditions;
};

Interval choose_rho(const ModelDescriptor& model, const JordanDomain& J);

struct Z1Bounds {
    Interval Z11, Z12, Z13, Z14;
};
Z1Bounds compute_Z1(const PseudoDiag& pd, const Jacobian& jac, const Interval& rho);

// Finite factor sup_mu ||(S_N + t)^{-1} (P^N)^{-1} (L_N - mu)|| = FN * sJ.
struct FiniteFactor {
    Interval FN, sJ;
};
FiniteFactor compute_finite_factor(const PseudoDiag& pd, const Jacobian& jac, const JordanDomain& J, const Interval& rho);

struct ZuBounds {
    Interval Zu1, Zu2, Zu3, Zu1_q, Zu2_q, Zu3_q;
    DecayConstants decay;
};
// Closed-form templates for the mass of the resolvent outside Omega_d, from the
// exponential decay |f(x)| <= C exp(-a |x|_1) of the resolvent kernel.
ZuBounds zu_from_kernel(const FourierSeq& K, const DecayConstants& dc, double q_multiplier, const FiniteFactor& ff);
ZuBounds compute_Zu(const ModelDescriptor& model, const FourierSeq& U0, const JordanDomain& J, const FiniteFactor& ff);

struct CBounds {
    Interval C1, C2, lipschitz;
};
CBounds compute_C(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, const Interval& dist_rho,
                  const FiniteFactor& ff);

// All bounds plus the side conditions. Throws ConditionViolated naming the
// first failed inequality.
HomotopyBounds compute_bounds(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, const Jacobian& jac,
                              const PseudoDiag& pd, const JordanDomain& J);
// The same with everything supplied; used by tests and by finite toys.
HomotopyBounds combine_bounds(const Z1Bounds& z1, const ZuBounds& zu, const CBounds& c, const Interval& r0,
                              const Interval& PN_norm, const FiniteFactor& ff);

// Inflation: per-disk epsilons (inner disks then ring disks, DiskSet order)
// plus the tail rule radius -> radius_base + factor * |c + t|.
struct Inflation {
    std::vector<Interval> eps;
    Interval tail_radius_base;
    Interval tail_factor;
};
Inflation assemble_epsilons(const PseudoDiag& pd, const Jacobian& jac, const DiskSet& ds, const HomotopyBounds& hb);
Inflation assemble_epsilons_selfadjoint(const ModelDescriptor& model, const PseudoDiag& pd, const Jacobian& jac,
                                        const DiskSet& ds, const HomotopyBounds& hb, const JordanDomain& J);
DiskSet inflate(const DiskSet& ds, const Inflation& inf, const ComplexBox& t);

// Does the inflated tail family stay clear of J?
bool tail_clear_of(const DiskSet& ds, const ModelDescriptor& model, const JordanDomain& J);

struct ClusterStatement {
    ComplexBox hull;
    int multiplicity = 0;
    std::string sign;  // "positive", "negative", "contains_zero"
    std::vector<Index> indices;
    int zero_eigenvalues = 0;  // set by kernel reconciliation
};

struct CertifyOptions {
    bool self_adjoint_path = true;  // used when the run is self-adjoint
    std::optional<int> invariance_dim;
};

struct SectorCertificate {
    std::string sector;
    ComplexBox t;
    JordanDomain J;
    HomotopyBounds bounds;
    std::string path;  // "general" or "self_adjoint"
    DiskSet inflated;
    std::vector<ClusterStatement> clusters;
    int positive = 0, negative = 0, straddling = 0;  // multiplicities
    bool tail_clear = false;
    Interval spectral_upper{0.0};  // max real part over the reported clusters
    Interval spectral_lower{0.0};
};

// Final stage: inflate, re-cluster, check every reported cluster against J
// and the tail family, and write the counting statements.
SectorCertificate certify(const ModelDescriptor& model, const Jacobian& jac, const PseudoDiag& pd, const DiskSet& disks,
                          const HomotopyBounds& hb, const JordanDomain& J, const CertifyOptions& opt);

nlohmann::json bounds_to_json(const HomotopyBounds& hb);
nlohmann::json sector_to_json(const SectorCertificate& sc);

}  // namespace spectral
