#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace flamefront {

using Point2 = std::array<double, 2>;

/// Origin-centred square grid [-W, W]^2. Values live on the cells_per_axis+1
/// nodes per axis; cells_per_axis is even so that a node sits exactly at the
/// origin. The outermost node ring carries the far-field Dirichlet condition.
class GridSpec {
public:
    GridSpec() = default;
    GridSpec(double half_width, int cells_per_axis);

    double half_width() const { return half_width_; }
    int cells_per_axis() const { return cells_; }
    int nodes_per_axis() const { return cells_ + 1; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(nodes_per_axis()) * static_cast<std::size_t>(nodes_per_axis());
    }
    double spacing() const { return spacing_; }
    static constexpr int dimension() { return 2; }

    /// Coordinate of node index i along either axis; exactly 0 at the centre
    /// and exactly antisymmetric about it.
    double coordinate(int i) const { return static_cast<double>(i - cells_ / 2) * spacing_; }
    int centre_index() const { return cells_ / 2; }

    bool operator==(const GridSpec&) const = default;

private:
    double half_width_ = 1.0;
    int cells_ = 16;
    double spacing_ = 0.125;
};

/// Nodal values of u(., t) on a GridSpec, row-major with y as the slow index.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridSpec grid, double time = 0.0);
    ScalarField(GridSpec grid, std::vector<double> values, double time);

    /// Samples fn(x, y) at interior nodes; the boundary ring stays 0.
    template <class Fn>
    static ScalarField from_function(const GridSpec& grid, Fn&& fn, double time = 0.0) {
        ScalarField f(grid, time);
        const int n = grid.nodes_per_axis();
        for (int j = 1; j + 1 < n; ++j) {
            for (int i = 1; i + 1 < n; ++i) {
                f.at(i, j) = fn(grid.coordinate(i), grid.coordinate(j));
            }
        }
        return f;
    }

    const GridSpec& grid() const { return grid_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    int nodes() const { return grid_.nodes_per_axis(); }
    double& at(int i, int j) { return values_[index(i, j)]; }
    double at(int i, int j) const { return values_[index(i, j)]; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes()) + static_cast<std::size_t>(i);
    }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double max_value() const;
    /// h^2 * sum of values, the discrete integral of u.
    double mass() const;

    bool is_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nodes() - 1 || j == nodes() - 1;
    }

    /// Checks nonnegativity and the zero boundary ring.
    bool satisfies_invariants() const;

    bool operator==(const ScalarField&) const = default;

private:
    GridSpec grid_;
    std::vector<double> values_;
    double time_ = 0.0;
};

/// Five-point Laplacian at interior nodes, 0 on the boundary ring.
ScalarField laplacian(const ScalarField& field);

/// |grad u| by central differences at interior nodes and one-sided
/// differences on the boundary ring.
ScalarField gradient_magnitude(const ScalarField& field);

/// Bilinear interpolation; throws DomainError outside [-W, W]^2.
double sample(const ScalarField& field, Point2 point);

// Snapshot files. Text: header line then row-major values. Binary: the same
// header line space-padded to a fixed 128-byte preamble, then little-endian
// float64 values.
inline constexpr std::size_t kSnapshotPreambleBytes = 128;

std::string snapshot_header(const ScalarField& field);
void write_snapshot_text(const ScalarField& field, std::ostream& out);
ScalarField read_snapshot_text(std::istream& in);
void write_snapshot_binary(const ScalarField& field, std::ostream& out);
ScalarField read_snapshot_binary(std::istream& in);

void save_snapshot(const ScalarField& field, const std::string& path, bool binary);
ScalarField load_snapshot(const std::string& path);

}  // namespace flamefront
