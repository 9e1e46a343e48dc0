#include "spectral/fourier.hpp"

#include <boost/beast/core/detail/base64.hpp>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace spectral {

using nlohmann::json;

void GridSpec::validate() const {
    if (m != 1 && m != 2) throw InvalidParameter("dimension m must be 1 or 2");
    if (N < 1) throw InvalidParameter("truncation N must be >= 1");
    if (!(d > 0.0) || !std::isfinite(d)) throw InvalidParameter("half-period d must be positive");
}

Sector Sector::parse(const std::string& name, int m) {
    Sector s;
    s.m = m;
    if (name == "full") return s;
    auto parity = [&](char c) {
        if (c == 'c') return Parity::Even;
        if (c == 's') return Parity::Odd;
        throw FormatError("unknown sector '" + name + "'");
    };
    if (static_cast<int>(name.size()) != m) throw FormatError("sector '" + name + "' does not match m");
    for (int a = 0; a < m; ++a) s.axis[a] = parity(name[a]);
    return s;
}

std::string Sector::name() const {
    if (is_full()) return "full";
    std::string n;
    for (int a = 0; a < m; ++a) n.push_back(axis[a] == Parity::Even ? 'c' : 's');
    return n;
}

int Sector::axis_min(int a, int radius) const {
    switch (axis[a]) {
        case Parity::Full: return -radius;
        case Parity::Even: return 0;
        case Parity::Odd: return 1;
    }
    return 0;
}

int Sector::orbit_size(const Index& n) const {
    int s = 1;
    for (int a = 0; a < m; ++a) {
        if (axis[a] == Parity::Odd || (axis[a] == Parity::Even && n[a] != 0)) s *= 2;
    }
    return s;
}

std::vector<std::pair<Index, int>> Sector::orbit(const Index& n) const {
    std::vector<std::pair<Index, int>> out{{n, 1}};
    for (int a = 0; a < m; ++a) {
        if (axis[a] == Parity::Full || n[a] == 0) continue;
        size_t k = out.size();
        for (size_t i = 0; i < k; ++i) {
            Index r = out[i].first;
            r[a] = -r[a];
            out.push_back({r, axis[a] == Parity::Odd ? -out[i].second : out[i].second});
        }
    }
    return out;
}

std::pair<Index, int> Sector::canonical(const Index& n) const {
    Index r = n;
    int sign = 1;
    for (int a = 0; a < m; ++a) {
        if (axis[a] == Parity::Full) continue;
        if (axis[a] == Parity::Odd) {
            if (n[a] == 0) return {r, 0};
            if (n[a] < 0) sign = -sign;
        }
        r[a] = std::abs(n[a]);
    }
    if (m == 1) r[1] = 0;
    return {r, sign};
}

int Sector::tail_orbit_ratio() const {
    if (m == 1 || is_full()) return 1;
    for (int a = 0; a < m; ++a)
        if (axis[a] == Parity::Even) return 2;
    return 1;
}

Sector sector_product(const Sector& a, const Sector& b) {
    if (a.m != b.m) throw SectorMismatch("sector dimensions differ");
    if (a.is_full() || b.is_full()) return Sector::full(a.m);
    Sector s;
    s.m = a.m;
    for (int i = 0; i < a.m; ++i) s.axis[i] = (a.axis[i] == b.axis[i]) ? Parity::Even : Parity::Odd;
    return s;
}

std::vector<Index> stored_indices(const Sector& s, int radius) {
    std::vector<Index> out;
    if (s.m == 1) {
        for (int i = s.axis_min(0, radius); i <= radius; ++i) out.push_back({i, 0});
    } else {
        for (int i = s.axis_min(0, radius); i <= radius; ++i)
            for (int j = s.axis_min(1, radius); j <= radius; ++j) out.push_back({i, j});
    }
    return out;
}

FourierSeq::FourierSeq(GridSpec grid, Sector sector, int radius)
    : grid_(grid), sector_(sector), radius_(radius) {
    grid_.validate();
    if (sector.m != grid.m) throw SectorMismatch("sector dimension differs from grid");
    if (radius < 0) throw InvalidParameter("negative support radius");
    indices_ = stored_indices(sector_, radius_);
    coeffs_.assign(indices_.size(), Interval(0.0));
}

FourierSeq FourierSeq::delta(GridSpec grid, Sector sector) {
    for (int a = 0; a < sector.m; ++a)
        if (sector.axis[a] == Parity::Odd) throw SectorMismatch("delta_0 is not in an odd sector");
    FourierSeq u(grid, sector, 0);
    u.set({0, 0}, Interval(1.0));
    return u;
}

long FourierSeq::position(const Index& n) const {
    long pos = 0;
    for (int a = 0; a < grid_.m; ++a) {
        int lo = sector_.axis_min(a, radius_);
        if (n[a] < lo || n[a] > radius_) return -1;
        pos = pos * (radius_ - lo + 1) + (n[a] - lo);
    }
    return pos;
}

Interval FourierSeq::at(const Index& n) const {
    Index q = n;
    if (grid_.m == 1) q[1] = 0;
    auto [rep, sign] = sector_.canonical(q);
    if (sign == 0) return Interval(0.0);
    long p = position(rep);
    if (p < 0) return Interval(0.0);
    return sign > 0 ? coeffs_[p] : -coeffs_[p];
}

void FourierSeq::set(const Index& stored, const Interval& v) {
    long p = position(stored);
    if (p < 0) throw InvalidParameter("index outside stored support");
    coeffs_[p] = v;
}

FourierSeq FourierSeq::with_grid(GridSpec g) const {
    if (g.m != grid_.m) throw GridMismatch("dimension change");
    FourierSeq u = *this;
    u.grid_ = g;
    return u;
}

std::vector<double> FourierSeq::mid() const {
    std::vector<double> out(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].mid();
    return out;
}

namespace {

void require_compatible(const FourierSeq& u, const FourierSeq& v) {
    if (u.grid().m != v.grid().m || u.grid().d != v.grid().d) throw GridMismatch("sequences live on different grids");
}

bool is_exact_zero(const Interval& x) { return x.lo() == 0.0 && x.hi() == 0.0; }

}  // namespace

FourierSeq conv(const FourierSeq& u, const FourierSeq& v) {
    require_compatible(u, v);
    FourierSeq w(u.grid(), sector_product(u.sector(), v.sector()), u.radius() + v.radius());
    std::vector<std::pair<Index, Interval>> full_u;
    for (size_t i = 0; i < u.size(); ++i) {
        if (is_exact_zero(u.coeffs()[i])) continue;
        for (const auto& [p, sgn] : u.sector().orbit(u.indices()[i]))
            full_u.push_back({p, sgn > 0 ? u.coeffs()[i] : -u.coeffs()[i]});
    }
    const int m = u.grid().m;
    for (size_t j = 0; j < w.size(); ++j) {
        const Index& n = w.indices()[j];
        Interval s(0.0);
        for (const auto& [p, up] : full_u) {
            Index q{n[0] - p[0], m == 2 ? n[1] - p[1] : 0};
            if (sup_norm(q, m) > v.radius()) continue;
            Interval vq = v.at(q);
            if (is_exact_zero(vq)) continue;
            s += up * vq;
        }
        w.coeffs()[j] = s;
    }
    return w;
}

FourierSeq operator+(const FourierSeq& u, const FourierSeq& v) {
    require_compatible(u, v);
    if (!(u.sector() == v.sector())) throw SectorMismatch("adding sequences from different sectors");
    FourierSeq w(u.grid(), u.sector(), std::max(u.radius(), v.radius()));
    for (size_t j = 0; j < w.size(); ++j) w.coeffs()[j] = u.at(w.indices()[j]) + v.at(w.indices()[j]);
    return w;
}

FourierSeq scale(const FourierSeq& u, const Interval& c) {
    FourierSeq w = u;
    for (auto& x : w.coeffs()) x = x * c;
    return w;
}

SeqNorms seq_norms(const FourierSeq& u) {
    Interval l1(0.0), l2(0.0);
    for (size_t i = 0; i < u.size(); ++i) {
        Interval w(static_cast<double>(u.sector().orbit_size(u.indices()[i])));
        l1 += iv_abs(u.coeffs()[i]) * w;
        l2 += sqr(u.coeffs()[i]) * w;
    }
    return {l1, iv_sqrt(l2)};
}

FourierSeq project_inner(const FourierSeq& u, int N) {
    FourierSeq w(u.grid(), u.sector(), std::min(u.radius(), std::max(N, 0)));
    for (size_t j = 0; j < w.size(); ++j) w.coeffs()[j] = u.at(w.indices()[j]);
    return w;
}

FourierSeq project_outer(const FourierSeq& u, int N) {
    FourierSeq w = u;
    for (size_t j = 0; j < w.size(); ++j)
        if (sup_norm(w.indices()[j], u.grid().m) <= N) w.coeffs()[j] = Interval(0.0);
    return w;
}

std::vector<ComplexBox> sample_gamma_dagger_complex(const FourierSeq& u, const std::vector<Point>& points) {
    const int m = u.grid().m;
    const Interval d(u.grid().d);
    const Interval pid = pi() / d;
    std::vector<ComplexBox> out;
    out.reserve(points.size());
    for (const auto& x : points) {
        bool inside = true;
        for (int a = 0; a < m; ++a) inside = inside && std::fabs(x[a]) < u.grid().d;
        if (!inside) {
            out.emplace_back(0.0);
            continue;
        }
        ComplexBox s(0.0);
        for (size_t i = 0; i < u.size(); ++i) {
            if (is_exact_zero(u.coeffs()[i])) continue;
            const Index& n = u.indices()[i];
            ComplexBox f(1.0);
            for (int a = 0; a < m; ++a) {
                Interval theta = pid * Interval(static_cast<double>(n[a])) * Interval(x[a]);
                switch (u.sector().axis[a]) {
                    case Parity::Full: f = f * expi(theta); break;
                    case Parity::Even: f = f * (n[a] == 0 ? Interval(1.0) : Interval(2.0) * cos(theta)); break;
                    case Parity::Odd: f = f * (Interval(2.0) * sin(theta)); break;
                }
            }
            s = s + f * ComplexBox(u.coeffs()[i]);
        }
        out.push_back(s);
    }
    return out;
}

std::vector<Interval> sample_gamma_dagger(const FourierSeq& u, const std::vector<Point>& points) {
    auto z = sample_gamma_dagger_complex(u, points);
    std::vector<Interval> out;
    out.reserve(z.size());
    for (const auto& v : z) out.push_back(v.re);
    return out;
}

std::string seq_to_json(const FourierSeq& u) {
    std::vector<double> raw;
    raw.reserve(2 * u.size());
    for (const auto& c : u.coeffs()) {
        raw.push_back(c.lo());
        raw.push_back(c.hi());
    }
    static_assert(sizeof(double) == 8);
    std::string bytes(raw.size() * 8, '\0');
    std::memcpy(bytes.data(), raw.data(), bytes.size());  // x86-64 and aarch64 are little-endian
    std::string b64(boost::beast::detail::base64::encoded_size(bytes.size()), '\0');
    b64.resize(boost::beast::detail::base64::encode(b64.data(), bytes.data(), bytes.size()));
    json j = {{"format", "spectral-seq"},
              {"version", 1},
              {"m", u.grid().m},
              {"N", u.grid().N},
              {"d", shortest_decimal(u.grid().d)},
              {"sector", u.sector().name()},
              {"radius", u.radius()},
              {"layout", "lo_hi_pairs"},
              {"payload", b64}};
    return j.dump(2);
}

namespace {

std::vector<double> decode_payload(const std::string& b64) {
    std::string bytes(boost::beast::detail::base64::decoded_size(b64.size()), '\0');
    auto res = boost::beast::detail::base64::decode(bytes.data(), b64.data(), b64.size());
    bytes.resize(res.first);
    if (bytes.size() % 8 != 0) throw FormatError("payload is not a whole number of binary64 values");
    std::vector<double> vals(bytes.size() / 8);
    std::memcpy(vals.data(), bytes.data(), bytes.size());
    return vals;
}

FourierSeq seq_from_header(const json& j, const std::vector<double>& vals) {
    GridSpec g{j.at("m").get<int>(), j.at("N").get<int>(), 0.0};
    const auto& dj = j.at("d");
    g.d = dj.is_string() ? parse_double_exact(dj.get<std::string>()) : dj.get<double>();
    FourierSeq u(g, Sector::parse(j.at("sector").get<std::string>(), g.m), j.at("radius").get<int>());
    std::string layout = j.value("layout", "lo_hi_pairs");
    size_t per = layout == "points" ? 1 : 2;
    if (layout != "points" && layout != "lo_hi_pairs") throw FormatError("unknown payload layout " + layout);
    if (vals.size() != per * u.size()) throw FormatError("payload length does not match header");
    for (size_t i = 0; i < u.size(); ++i)
        u.coeffs()[i] = per == 1 ? Interval(vals[i]) : Interval(vals[2 * i], vals[2 * i + 1]);
    return u;
}

}  // namespace

FourierSeq seq_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "spectral-seq") throw FormatError("not a sequence file");
    return seq_from_header(j, decode_payload(j.at("payload").get<std::string>()));
}

void write_seq_file(const FourierSeq& u, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw FormatError("cannot write " + path);
    f << seq_to_json(u) << "\n";
}

FourierSeq read_seq_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    json j = json::parse(ss.str());
    if (j.value("format", "") != "spectral-seq") throw FormatError("not a sequence file: " + path);
    if (j.contains("payload_file")) {
        auto side = std::filesystem::path(path).parent_path() / j.at("payload_file").get<std::string>();
        std::ifstream b(side, std::ios::binary);
        if (!b) throw FormatError("cannot read sidecar " + side.string());
        std::string bytes((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        if (bytes.size() % 8 != 0) throw FormatError("sidecar is not a whole number of binary64 values");
        std::vector<double> vals(bytes.size() / 8);
        std::memcpy(vals.data(), bytes.data(), bytes.size());
        return seq_from_header(j, vals);
    }
    return seq_from_header(j, decode_payload(j.at("payload").get<std::string>()));
}

FourierSeq read_seq_csv(const std::string& path, GridSpec grid, Sector sector) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot read " + path);
    std::vector<std::pair<Index, Interval>> rows;
    int radius = 0;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) {
            c.erase(0, c.find_first_not_of(" \t"));
            c.erase(c.find_last_not_of(" \t\r") + 1);
            cols.push_back(c);
        }
        if (static_cast<int>(cols.size()) != grid.m + 1) throw FormatError("bad CSV row: " + line);
        if (!(std::isdigit(static_cast<unsigned char>(cols[0][0])) || cols[0][0] == '-')) continue;  // header
        Index n{std::stoi(cols[0]), grid.m == 2 ? std::stoi(cols[1]) : 0};
        rows.push_back({n, parse_interval_literal(cols.back())});
        radius = std::max(radius, sup_norm(n, grid.m));
    }
    FourierSeq u(grid, sector, radius);
    for (const auto& [n, v] : rows) u.set(n, v);
    return u;
}

}  // namespace spectral
