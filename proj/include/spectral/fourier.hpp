#pragma once

#include <array>
#include <string>
#include <vector>

#include "spectral/interval.hpp"

namespace spectral {

using Index = std::array<int, 2>;  // second component unused when m == 1

struct GridSpec {
    int m = 1;       // spatial dimension, 1 or 2
    int N = 1;       // truncation radius of I^N
    double d = 1.0;  // half-period: Omega_d = (-d, d)^m

    void validate() const;
    bool operator==(const GridSpec& o) const { return m == o.m && N == o.N && d == o.d; }
};

enum class Parity { Full, Even, Odd };

// Reflection symmetry class of a sequence, one parity per axis.
struct Sector {
    int m = 1;
    std::array<Parity, 2> axis{Parity::Full, Parity::Full};

    static Sector parse(const std::string& name, int m);
    static Sector full(int m) { return parse("full", m); }
    std::string name() const;
    bool is_full() const { return axis[0] == Parity::Full; }
    bool operator==(const Sector& o) const { return m == o.m && axis == o.axis; }

    // Range of stored (fundamental-domain) indices along one axis for a radius.
    int axis_min(int a, int radius) const;
    // Number of distinct full-grid indices represented by stored index n.
    int orbit_size(const Index& n) const;
    // Distinct full-grid reflections of n with their coefficient signs.
    std::vector<std::pair<Index, int>> orbit(const Index& n) const;
    // Maps a full-grid index to its stored representative and sign; sign 0
    // means the coefficient vanishes identically in this sector.
    std::pair<Index, int> canonical(const Index& n) const;
    // Upper bound on orbit_size(n) / orbit_size(k) over index pairs met in the
    // far tail of a convolution operator (used by tail Gershgorin bounds).
    int tail_orbit_ratio() const;
};

Sector sector_product(const Sector& a, const Sector& b);

// Enumerates the stored indices of a sector inside the box max|n_i| <= radius,
// in row-major fundamental-domain order.
std::vector<Index> stored_indices(const Sector& s, int radius);
inline int sup_norm(const Index& n, int m) { return m == 1 ? std::abs(n[0]) : std::max(std::abs(n[0]), std::abs(n[1])); }

// Finitely supported coefficient sequence on Z^m stored on its fundamental
// domain. Stored values are the full-grid coefficients at the representative
// index; reflections follow from the sector parities.
class FourierSeq {
public:
    FourierSeq() = default;
    FourierSeq(GridSpec grid, Sector sector, int radius);

    static FourierSeq delta(GridSpec grid, Sector sector);

    const GridSpec& grid() const { return grid_; }
    const Sector& sector() const { return sector_; }
    int radius() const { return radius_; }
    const std::vector<Index>& indices() const { return indices_; }
    const std::vector<Interval>& coeffs() const { return coeffs_; }
    std::vector<Interval>& coeffs() { return coeffs_; }
    size_t size() const { return coeffs_.size(); }

    // Position of a stored index in coeffs(), or -1.
    long position(const Index& stored) const;
    // Full-grid coefficient at any n in Z^m.
    Interval at(const Index& n) const;
    void set(const Index& stored, const Interval& v);

    FourierSeq with_grid(GridSpec g) const;
    std::vector<double> mid() const;

private:
    GridSpec grid_;
    Sector sector_;
    int radius_ = 0;
    std::vector<Index> indices_;
    std::vector<Interval> coeffs_;
};

FourierSeq conv(const FourierSeq& u, const FourierSeq& v);
FourierSeq operator+(const FourierSeq& u, const FourierSeq& v);
FourierSeq scale(const FourierSeq& u, const Interval& c);

struct SeqNorms {
    Interval ell1;
    Interval ell2;
};
SeqNorms seq_norms(const FourierSeq& u);

FourierSeq project_inner(const FourierSeq& u, int N);
FourierSeq project_outer(const FourierSeq& u, int N);

using Point = std::array<double, 2>;
// Values of the function whose Fourier coefficients on Omega_d are u, zero
// outside Omega_d. Odd axes carry the factor making the synthesis real.
std::vector<Interval> sample_gamma_dagger(const FourierSeq& u, const std::vector<Point>& points);
std::vector<ComplexBox> sample_gamma_dagger_complex(const FourierSeq& u, const std::vector<Point>& points);

// Sequence files: JSON header plus base64 little-endian binary64 payload of
// (lo, hi) pairs in fundamental-domain row-major order.
std::string seq_to_json(const FourierSeq& u);
FourierSeq seq_from_json(const std::string& text);
void write_seq_file(const FourierSeq& u, const std::string& path);
FourierSeq read_seq_file(const std::string& path);
// Plain CSV rows "n1,value" (m = 1) or "n1,n2,value" (m = 2).
FourierSeq read_seq_csv(const std::string& path, GridSpec grid, Sector sector);

}  // namespace spectral
