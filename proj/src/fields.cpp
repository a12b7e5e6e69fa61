#include "flamefront/fields.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flamefront/error.hpp"

namespace flamefront {

GridSpec::GridSpec(double half_width, int cells_per_axis)
    : half_width_(half_width), cells_(cells_per_axis) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ParameterError("grid half_width must be positive and finite");
    }
    if (cells_per_axis < 16) {
        throw ParameterError("grid cells_per_axis must be at least 16");
    }
    if (cells_per_axis % 2 != 0) {
        throw ParameterError("grid cells_per_axis must be even so a node sits at the origin");
    }
    spacing_ = 2.0 * half_width / static_cast<double>(cells_per_axis);
}

ScalarField::ScalarField(GridSpec grid, double time)
    : grid_(grid), values_(grid.node_count(), 0.0), time_(time) {}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
    if (values_.size() != grid_.node_count()) {
        throw ParameterError("field value count does not match grid");
    }
}

double ScalarField::max_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
}

double ScalarField::mass() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * grid_.spacing() * grid_.spacing();
}

bool ScalarField::satisfies_invariants() const {
    const int n = nodes();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double v = at(i, j);
            if (!(v >= 0.0)) return false;
            if (is_boundary(i, j) && v != 0.0) return false;
        }
    }
    return true;
}

ScalarField laplacian(const ScalarField& field) {
    ScalarField out(field.grid(), field.time());
    const int n = field.nodes();
    const double inv_h2 = 1.0 / (field.grid().spacing() * field.grid().spacing());
    for (int j = 1; j + 1 < n; ++j) {
        for (int i = 1; i + 1 < n; ++i) {
            const double sum = field.at(i - 1, j) + field.at(i + 1, j) + field.at(i, j - 1) + field.at(i, j + 1);
            out.at(i, j) = (sum - 4.0 * field.at(i, j)) * inv_h2;
        }
    }
    return out;
}

ScalarField gradient_magnitude(const ScalarField& field) {
    ScalarField out(field.grid(), field.time());
    const int n = field.nodes();
    const double h = field.grid().spacing();
    auto derivative = [&](int i, int j, int di, int dj) {
        const int lo_i = i - di, lo_j = j - dj, hi_i = i + di, hi_j = j + dj;
        const bool has_lo = lo_i >= 0 && lo_j >= 0;
        const bool has_hi = hi_i < n && hi_j < n;
        if (has_lo && has_hi) return (field.at(hi_i, hi_j) - field.at(lo_i, lo_j)) / (2.0 * h);
        if (has_hi) return (field.at(hi_i, hi_j) - field.at(i, j)) / h;
        return (field.at(i, j) - field.at(lo_i, lo_j)) / h;
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.at(i, j) = std::hypot(derivative(i, j, 1, 0), derivative(i, j, 0, 1));
        }
    }
    return out;
}

double sample(const ScalarField& field, Point2 point) {
    const GridSpec& g = field.grid();
    const double w = g.half_width();
    if (!(std::abs(point[0]) <= w) || !(std::abs(point[1]) <= w)) {
        throw DomainError("sample point outside the grid square");
    }
    const int last = g.cells_per_axis();
    const double fx = point[0] / g.spacing() + static_cast<double>(g.centre_index());
    const double fy = point[1] / g.spacing() + static_cast<double>(g.centre_index());
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, last - 1);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, last - 1);
    const double tx = std::clamp(fx - i, 0.0, 1.0);
    const double ty = std::clamp(fy - j, 0.0, 1.0);
    const double v00 = field.at(i, j), v10 = field.at(i + 1, j);
    const double v01 = field.at(i, j + 1), v11 = field.at(i + 1, j + 1);
    return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
}

namespace {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Header {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    double t = 0.0;
};

Header parse_header(const std::string& line) {
    std::istringstream in(line);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "FLAMEGRID" || version != "v1") throw IoError("not a FLAMEGRID v1 snapshot");
    Header hdr;
    bool seen[4] = {false, false, false, false};
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw IoError("malformed snapshot header token: " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        try {
            if (key == "nx") { hdr.nx = std::stoi(val); seen[0] = true; }
            else if (key == "ny") { hdr.ny = std::stoi(val); seen[1] = true; }
            else if (key == "h") { hdr.h = std::stod(val); seen[2] = true; }
            else if (key == "t") { hdr.t = std::stod(val); seen[3] = true; }
            else throw IoError("unknown snapshot header key: " + key);
        } catch (const std::logic_error&) {
            throw IoError("unparsable snapshot header value: " + tok);
        }
    }
    for (bool s : seen) {
        if (!s) throw IoError("incomplete snapshot header");
    }
    if (hdr.nx != hdr.ny || hdr.nx < 17 || hdr.h <= 0.0) throw IoError("unsupported snapshot geometry");
    return hdr;
}

GridSpec grid_from_header(const Header& hdr) {
    const int cells = hdr.nx - 1;
    return GridSpec(0.5 * hdr.h * cells, cells);
}

}  // namespace

std::string snapshot_header(const ScalarField& field) {
    const int n = field.nodes();
    return "FLAMEGRID v1 nx=" + std::to_string(n) + " ny=" + std::to_string(n) + " h=" +
           format_real(field.grid().spacing()) + " t=" + format_real(field.time());
}

void write_snapshot_text(const ScalarField& field, std::ostream& out) {
    out << snapshot_header(field) << '\n';
    const int n = field.nodes();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i) out << ' ';
            out << format_real(field.at(i, j));
        }
        out << '\n';
    }
}

ScalarField read_snapshot_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty snapshot stream");
    const Header hdr = parse_header(line);
    ScalarField field(grid_from_header(hdr), hdr.t);
    for (double& v : field.values()) {
        if (!(in >> v)) throw IoError("snapshot truncated");
    }
    return field;
}

void write_snapshot_binary(const ScalarField& field, std::ostream& out) {
    std::string pre = snapshot_header(field);
    if (pre.size() + 1 > kSnapshotPreambleBytes) throw IoError("snapshot header exceeds preamble");
    pre.resize(kSnapshotPreambleBytes - 1, ' ');
    pre.push_back('\n');
    out.write(pre.data(), static_cast<std::streamsize>(pre.size()));
    for (double v : field.values()) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char bytes[8];
        for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xffu);
        out.write(reinterpret_cast<const char*>(bytes), 8);
    }
}

ScalarField read_snapshot_binary(std::istream& in) {
    std::string pre(kSnapshotPreambleBytes, '\0');
    if (!in.read(pre.data(), static_cast<std::streamsize>(pre.size()))) throw IoError("binary snapshot truncated");
    const Header hdr = parse_header(pre.substr(0, pre.find('\n')));
    ScalarField field(grid_from_header(hdr), hdr.t);
    for (double& v : field.values()) {
        unsigned char bytes[8];
        if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("binary snapshot truncated");
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
        v = std::bit_cast<double>(bits);
    }
    return field;
}

void save_snapshot(const ScalarField& field, const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open " + path);
    if (binary) write_snapshot_binary(field, out);
    else write_snapshot_text(field, out);
    if (!out) throw IoError("write failed: " + path);
}

ScalarField load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char probe[kSnapshotPreambleBytes];
    in.read(probe, sizeof probe);
    const std::string head(probe, static_cast<std::size_t>(in.gcount()));
    in.clear();
    in.seekg(0);
    // A binary preamble is exactly 128 bytes with the newline last.
    const bool binary = head.size() == kSnapshotPreambleBytes && head.find('\n') == kSnapshotPreambleBytes - 1;
    return binary ? read_snapshot_binary(in) : read_snapshot_text(in);
}

}  // namespace flamefront
