#pragma once

// Grid-sampled workspace and joint-space sections, aspect labeling and the
// operation-mode transition analysis along the home lines.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pipir/constraint_model.hpp"
#include "pipir/errors.hpp"
#include "pipir/kinematics.hpp"
#include "pipir/parallel.hpp"
#include "pipir/singularity.hpp"

namespace pipir {

inline Pose home_pose(Mode) noexcept { return Pose{}; }

// One sampled axis. Periodic axes cover (lo, hi] with n samples,
// lo + (i + 1) * (hi - lo) / n; linear axes are inclusive linspaces.
struct Axis {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;
    bool periodic = false;

    double value(int i) const noexcept {
        if (periodic) {
            return lo + (i + 1) * ((hi - lo) / n);
        }
        return lo + i * ((hi - lo) / (n - 1));
    }

    double step() const noexcept { return periodic ? (hi - lo) / n : (hi - lo) / (n - 1); }
};

enum class MapKind { Workspace, JointSpace };

struct GridSpec {
    Mode mode = Mode::One;
    MapKind kind = MapKind::Workspace;
    Axis axis1;
    Axis axis2;
    // Values of the coordinates that are not section axes (y = 0 by default).
    Pose fixed{};
    WorkingMode wm{};
    // Joint-space slice value of rho1.
    double rho1 = 0.0;
    // Sub-samples per cell edge used to confirm that neighbours are not
    // separated by a pair of crossing singularity curves.
    int edge_samples = 7;
    Tolerances tol{};
    unsigned threads = 0;

    void validate() const {
        if (axis1.n < 2 || axis2.n < 2) {
            throw ConfigurationError("grid resolution must be at least 2 per axis");
        }
        if (!(axis1.hi > axis1.lo) || !(axis2.hi > axis2.lo)) {
            throw ConfigurationError("grid axis range is empty");
        }
        if (edge_samples < 0) {
            throw ConfigurationError("edge_samples must be non-negative");
        }
    }
};

// Section axes per mode: (x, z), (x, alpha), (x, alpha), (z, alpha).
inline std::array<Coord, 2> section_coords(Mode m) {
    switch (m) {
    case Mode::One: return {Coord::X, Coord::Z};
    case Mode::Two:
    case Mode::Three: return {Coord::X, Coord::Alpha};
    case Mode::Four: return {Coord::Z, Coord::Alpha};
    }
    throw ConfigurationError("unknown operation mode");
}

inline std::string coord_name(Coord c) {
    switch (c) {
    case Coord::X: return "x";
    case Coord::Y: return "y";
    case Coord::Z: return "z";
    case Coord::Alpha: return "alpha";
    }
    return "?";
}

inline Axis default_section_axis(Mode m, Coord c, int n) {
    if (c == Coord::Alpha) {
        return {"alpha", -std::numbers::pi, std::numbers::pi, n, true};
    }
    if (m == Mode::One) {
        return {coord_name(c), -1.2, 1.2, n, false};
    }
    if (m == Mode::Four) {
        return {"z", -0.3, 1.1, n, false};
    }
    return {"x", -0.7, 0.7, n, false};
}

inline GridSpec workspace_spec(Mode m, const WorkingMode& wm, int resolution) {
    GridSpec spec;
    spec.mode = m;
    spec.kind = MapKind::Workspace;
    const auto coords = section_coords(m);
    spec.axis1 = default_section_axis(m, coords[0], resolution);
    spec.axis2 = default_section_axis(m, coords[1], resolution);
    spec.wm = wm;
    return spec;
}

inline GridSpec jointspace_spec(Mode m, int resolution) {
    GridSpec spec;
    spec.mode = m;
    spec.kind = MapKind::JointSpace;
    spec.axis1 = {"rho2", -2.2, 2.2, resolution, false};
    spec.axis2 = {"rho3", -2.2, 2.2, resolution, false};
    spec.rho1 = 0.0;
    return spec;
}

struct Cell {
    bool feasible = false;
    std::int8_t detA_sign = 0;
    std::int8_t n_fk = 0;
    int aspect_id = -1;
    // Any leg at (or within tolerance of) a serial singularity.
    bool serial = false;
    double min_abs_B = 0.0;
    // Same-aspect connectivity towards the next cell along axis 1 / axis 2.
    bool link1 = false;
    bool link2 = false;
};

struct GridMap {
    GridSpec spec;
    std::vector<Cell> cells;

    std::size_t index(int i1, int i2) const noexcept {
        return static_cast<std::size_t>(i1) * static_cast<std::size_t>(spec.axis2.n) +
               static_cast<std::size_t>(i2);
    }
    const Cell& at(int i1, int i2) const noexcept { return cells[index(i1, i2)]; }
    Cell& at(int i1, int i2) noexcept { return cells[index(i1, i2)]; }
    int n1() const noexcept { return spec.axis1.n; }
    int n2() const noexcept { return spec.axis2.n; }
};

inline Pose section_pose(const GridSpec& spec, double u, double v) {
    const auto coords = section_coords(spec.mode);
    Pose p = spec.fixed;
    p.set(coords[0], u);
    p.set(coords[1], v);
    return canonical_pose(spec.mode, p);
}

namespace detail {

struct SectionSample {
    bool feasible = false;
    int sign = 0;
    bool serial = false;
    double min_abs_B = 0.0;
};

inline SectionSample sample_section(const ConstraintSystem& sys, const GridSpec& spec, double u,
                                    double v) {
    SectionSample s;
    const Pose p = section_pose(spec, u, v);
    const IkSolution ik = solve_ik(sys, p, spec.wm);
    if (!ik.reachable) {
        return s;
    }
    s.feasible = true;
    const JacobianPair jp = jacobians_unchecked(sys, p, ik.joints);
    s.sign = is_parallel_singular(jp, spec.tol.parallel) ? 0 : (jp.detA() > 0.0 ? 1 : -1);
    s.min_abs_B = std::min({std::abs(jp.B[0]), std::abs(jp.B[1]), std::abs(jp.B[2])});
    s.serial = ik.boundary[0] || ik.boundary[1] || ik.boundary[2] || s.min_abs_B <= spec.tol.serial;
    return s;
}

inline bool edge_consistent(const ConstraintSystem& sys, const GridSpec& spec, double u0, double v0,
                            double du, double dv, int sign) {
    for (int k = 1; k <= spec.edge_samples; ++k) {
        const double t = static_cast<double>(k) / (spec.edge_samples + 1);
        const SectionSample s = sample_section(sys, spec, u0 + t * du, v0 + t * dv);
        if (!s.feasible || s.sign != sign) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Per-cell IK feasibility for the grid's working mode and sign of det A at
// the IK configuration.
inline GridMap workspace_map(const ConstraintSystem& sys, const GridSpec& spec) {
    spec.validate();
    if (spec.mode != sys.mode) {
        throw ConfigurationError("grid spec mode does not match the constraint system");
    }
    if (spec.kind != MapKind::Workspace) {
        throw ConfigurationError("workspace_map needs a workspace grid spec");
    }
    GridMap map{spec, std::vector<Cell>(static_cast<std::size_t>(spec.axis1.n) *
                                        static_cast<std::size_t>(spec.axis2.n))};
    const int n1 = spec.axis1.n;
    const int n2 = spec.axis2.n;
    parallel_for(map.cells.size(), spec.threads, [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx / static_cast<std::size_t>(n2));
        const int i2 = static_cast<int>(idx % static_cast<std::size_t>(n2));
        const auto s = detail::sample_section(sys, spec, spec.axis1.value(i1), spec.axis2.value(i2));
        Cell& c = map.cells[idx];
        c.feasible = s.feasible;
        c.detA_sign = static_cast<std::int8_t>(s.sign);
        c.serial = s.serial;
        c.min_abs_B = s.min_abs_B;
    });
    parallel_for(map.cells.size(), spec.threads, [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx / static_cast<std::size_t>(n2));
        const int i2 = static_cast<int>(idx % static_cast<std::size_t>(n2));
        Cell& c = map.cells[idx];
        if (!c.feasible || c.detA_sign == 0) {
            return;
        }
        const double u = spec.axis1.value(i1);
        const double v = spec.axis2.value(i2);
        if (i1 + 1 < n1) {
            const Cell& nb = map.at(i1 + 1, i2);
            c.link1 = nb.feasible && nb.detA_sign == c.detA_sign &&
                      detail::edge_consistent(sys, spec, u, v, spec.axis1.step(), 0.0, c.detA_sign);
        }
        if (i2 + 1 < n2 || spec.axis2.periodic) {
            const Cell& nb = map.at(i1, (i2 + 1) % n2);
            c.link2 = nb.feasible && nb.detA_sign == c.detA_sign &&
                      detail::edge_consistent(sys, spec, u, v, 0.0, spec.axis2.step(), c.detA_sign);
        }
    });
    return map;
}

struct Aspect {
    int id = 0;
    int sign = 0;
    std::size_t cells = 0;
    // Bounding box in axis coordinates (the periodic axis is not unwrapped).
    double min1 = 0.0;
    double max1 = 0.0;
    double min2 = 0.0;
    double max2 = 0.0;
    // Borders a cell of opposite or zero det A sign.
    bool touches_parallel = false;
    // Borders an infeasible cell (workspace boundary).
    bool touches_boundary = false;
};

struct AspectLabeling {
    std::vector<Aspect> aspects;
    // Components without a single fully interior cell: slivers narrower than
    // the grid spacing. They get no aspect id and are not counted.
    std::size_t unresolved_components = 0;
    std::size_t unresolved_cells = 0;

    std::size_t count() const noexcept { return aspects.size(); }
};

// Flood fill over feasible cells with nonzero det A sign. Neighbours join
// only through confirmed links; the periodic axis wraps. Aspect ids are
// assigned in cell index order, starting at 1.
inline AspectLabeling label_aspects(GridMap& map) {
    AspectLabeling out;
    std::vector<std::pair<int, int>> members;
    const int n1 = map.n1();
    const int n2 = map.n2();
    const bool wrap = map.spec.axis2.periodic;
    for (Cell& c : map.cells) {
        c.aspect_id = -1;
    }
    // Both directions of every link; returns the neighbour or nothing.
    auto linked = [&](int i1, int i2, int dir) -> std::optional<std::pair<int, int>> {
        switch (dir) {
        case 0:
            if (i1 + 1 < n1 && map.at(i1, i2).link1) return std::pair{i1 + 1, i2};
            break;
        case 1:
            if (i1 > 0 && map.at(i1 - 1, i2).link1) return std::pair{i1 - 1, i2};
            break;
        case 2:
            if ((i2 + 1 < n2 || wrap) && map.at(i1, i2).link2) return std::pair{i1, (i2 + 1) % n2};
            break;
        case 3:
            if (i2 > 0 || wrap) {
                const int j = (i2 + n2 - 1) % n2;
                if (map.at(i1, j).link2) return std::pair{i1, j};
            }
            break;
        }
        return std::nullopt;
    };
    auto raw_neighbour = [&](int i1, int i2, int dir) -> std::optional<std::pair<int, int>> {
        switch (dir) {
        case 0: if (i1 + 1 < n1) return std::pair{i1 + 1, i2}; break;
        case 1: if (i1 > 0) return std::pair{i1 - 1, i2}; break;
        case 2: if (i2 + 1 < n2 || wrap) return std::pair{i1, (i2 + 1) % n2}; break;
        case 3: if (i2 > 0 || wrap) return std::pair{i1, (i2 + n2 - 1) % n2}; break;
        }
        return std::nullopt;
    };

    std::deque<std::pair<int, int>> queue;
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n2; ++b) {
            Cell& seed = map.at(a, b);
            if (!seed.feasible || seed.detA_sign == 0 || seed.aspect_id >= 0) {
                continue;
            }
            Aspect asp;
            asp.id = static_cast<int>(out.aspects.size()) + 1;
            asp.sign = seed.detA_sign;
            asp.min1 = asp.max1 = map.spec.axis1.value(a);
            asp.min2 = asp.max2 = map.spec.axis2.value(b);
            bool interior = false;
            members.clear();
            seed.aspect_id = asp.id;
            queue.push_back({a, b});
            while (!queue.empty()) {
                const auto [i1, i2] = queue.front();
                queue.pop_front();
                members.push_back({i1, i2});
                ++asp.cells;
                int links = 0;
                const double u = map.spec.axis1.value(i1);
                const double v = map.spec.axis2.value(i2);
                asp.min1 = std::min(asp.min1, u);
                asp.max1 = std::max(asp.max1, u);
                asp.min2 = std::min(asp.min2, v);
                asp.max2 = std::max(asp.max2, v);
                for (int dir = 0; dir < 4; ++dir) {
                    const auto raw = raw_neighbour(i1, i2, dir);
                    if (!raw) {
                        continue;
                    }
                    const Cell& nb = map.at(raw->first, raw->second);
                    if (!nb.feasible) {
                        asp.touches_boundary = true;
                    } else if (nb.detA_sign != asp.sign) {
                        asp.touches_parallel = true;
                    }
                    const auto next = linked(i1, i2, dir);
                    if (!next) {
                        continue;
                    }
                    ++links;
                    Cell& nc = map.at(next->first, next->second);
                    if (nc.aspect_id < 0) {
                        nc.aspect_id = asp.id;
                        queue.push_back(*next);
                    }
                }
                interior = interior || links == 4;
            }
            if (interior) {
                out.aspects.push_back(asp);
            } else {
                // Released ids stay unused: the next component reuses asp.id.
                for (const auto& [i1, i2] : members) {
                    map.at(i1, i2).aspect_id = 0;
                }
                ++out.unresolved_components;
                out.unresolved_cells += asp.cells;
            }
        }
    }
    for (Cell& c : map.cells) {
        if (c.aspect_id == 0) {
            c.aspect_id = -1;
        }
    }
    return out;
}

// Count of real FK solutions (all working modes pooled) on the slice
// rho1 = spec.rho1, axes (rho2, rho3).
// Number of 4-connected components of feasible cells, ignoring det A
// (the periodic axis wraps).
inline std::size_t feasible_regions(const GridMap& map) {
    const int n1 = map.n1();
    const int n2 = map.n2();
    std::vector<char> seen(map.cells.size(), 0);
    std::deque<std::pair<int, int>> queue;
    std::size_t count = 0;
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n2; ++b) {
            if (!map.at(a, b).feasible || seen[map.index(a, b)]) {
                continue;
            }
            ++count;
            seen[map.index(a, b)] = 1;
            queue.push_back({a, b});
            while (!queue.empty()) {
                const auto [i1, i2] = queue.front();
                queue.pop_front();
                const std::array<std::pair<int, int>, 4> next{
                    {{i1 - 1, i2}, {i1 + 1, i2}, {i1, i2 - 1}, {i1, i2 + 1}}};
                for (auto [j1, j2] : next) {
                    if (map.spec.axis1.periodic) {
                        j1 = (j1 + n1) % n1;
                    }
                    if (map.spec.axis2.periodic) {
                        j2 = (j2 + n2) % n2;
                    }
                    if (j1 < 0 || j1 >= n1 || j2 < 0 || j2 >= n2) {
                        continue;
                    }
                    const std::size_t k = map.index(j1, j2);
                    if (map.cells[k].feasible && !seen[k]) {
                        seen[k] = 1;
                        queue.push_back({j1, j2});
                    }
                }
            }
        }
    }
    return count;
}

inline GridMap jointspace_map(const ConstraintSystem& sys, const GridSpec& spec) {
    spec.validate();
    if (spec.mode != sys.mode) {
        throw ConfigurationError("grid spec mode does not match the constraint system");
    }
    if (spec.kind != MapKind::JointSpace) {
        throw ConfigurationError("jointspace_map needs a joint-space grid spec");
    }
    GridMap map{spec, std::vector<Cell>(static_cast<std::size_t>(spec.axis1.n) *
                                        static_cast<std::size_t>(spec.axis2.n))};
    const int n2 = spec.axis2.n;
    parallel_for(map.cells.size(), spec.threads, [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx / static_cast<std::size_t>(n2));
        const int i2 = static_cast<int>(idx % static_cast<std::size_t>(n2));
        const JointInput q{{spec.rho1, spec.axis1.value(i1), spec.axis2.value(i2)}};
        const auto sols = forward_kinematics(sys, q);
        Cell& c = map.cells[idx];
        c.n_fk = static_cast<std::int8_t>(sols.size());
        c.feasible = !sols.empty();
    });
    return map;
}

struct SolutionRegion {
    std::size_t cells = 0;
    // Distinct n_fk values present, ascending.
    std::vector<int> counts;
    // Enclosed components of zero-solution cells bordering this region.
    int holes = 0;
};

// Connected regions of cells with at least one FK solution. Regions use
// 8-connectivity and holes the dual 4-connectivity, so thin diagonal bands
// stay connected at coarse resolution.
inline std::vector<SolutionRegion> solution_regions(const GridMap& map) {
    const int n1 = map.n1();
    const int n2 = map.n2();
    std::vector<int> region(map.cells.size(), -1);
    std::vector<SolutionRegion> out;
    std::deque<std::pair<int, int>> queue;
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n2; ++b) {
            if (map.at(a, b).n_fk == 0 || region[map.index(a, b)] >= 0) {
                continue;
            }
            const int id = static_cast<int>(out.size());
            SolutionRegion reg;
            std::array<bool, 8> seen{};
            region[map.index(a, b)] = id;
            queue.push_back({a, b});
            while (!queue.empty()) {
                const auto [i1, i2] = queue.front();
                queue.pop_front();
                ++reg.cells;
                const int n = map.at(i1, i2).n_fk;
                seen[static_cast<std::size_t>(std::clamp(n, 0, 7))] = true;
                for (int d1 = -1; d1 <= 1; ++d1) {
                    for (int d2 = -1; d2 <= 1; ++d2) {
                        const int j1 = i1 + d1;
                        const int j2 = i2 + d2;
                        if ((d1 == 0 && d2 == 0) || j1 < 0 || j2 < 0 || j1 >= n1 || j2 >= n2) {
                            continue;
                        }
                        const std::size_t k = map.index(j1, j2);
                        if (map.cells[k].n_fk != 0 && region[k] < 0) {
                            region[k] = id;
                            queue.push_back({j1, j2});
                        }
                    }
                }
            }
            for (int v = 1; v < 8; ++v) {
                if (seen[static_cast<std::size_t>(v)]) {
                    reg.counts.push_back(v);
                }
            }
            out.push_back(reg);
        }
    }

    // Zero-solution components that never reach the grid border are holes.
    std::vector<char> visited(map.cells.size(), 0);
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n2; ++b) {
            if (map.at(a, b).n_fk != 0 || visited[map.index(a, b)]) {
                continue;
            }
            bool border = false;
            std::vector<int> adjacent;
            visited[map.index(a, b)] = 1;
            queue.push_back({a, b});
            while (!queue.empty()) {
                const auto [i1, i2] = queue.front();
                queue.pop_front();
                border = border || i1 == 0 || i2 == 0 || i1 == n1 - 1 || i2 == n2 - 1;
                constexpr std::array<std::pair<int, int>, 4> dirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
                for (const auto& [d1, d2] : dirs) {
                    const int j1 = i1 + d1;
                    const int j2 = i2 + d2;
                    if (j1 < 0 || j2 < 0 || j1 >= n1 || j2 >= n2) {
                        continue;
                    }
                    const std::size_t k = map.index(j1, j2);
                    if (map.cells[k].n_fk != 0) {
                        if (std::find(adjacent.begin(), adjacent.end(), region[k]) == adjacent.end()) {
                            adjacent.push_back(region[k]);
                        }
                    } else if (!visited[k]) {
                        visited[k] = 1;
                        queue.push_back({j1, j2});
                    }
                }
            }
            if (!border) {
                for (int r : adjacent) {
                    ++out[static_cast<std::size_t>(r)].holes;
                }
            }
        }
    }
    return out;
}

// A home line: alpha = 0, y = 0 and one free coordinate (x for modes 2-3
// with z = 0, z for mode 4 with x = 0).
struct HomeLine {
    Mode mode = Mode::Two;
    Coord coord = Coord::X;

    Pose at(double t) const {
        Pose p;
        p.set(coord, t);
        return canonical_pose(mode, p);
    }
};

inline HomeLine home_line(Mode m) {
    if (m == Mode::One) {
        throw ConfigurationError("mode 1 has no home line");
    }
    return {m, m == Mode::Four ? Coord::Z : Coord::X};
}

// Function whose sign change along the home line is bisected.
enum class BoundaryFunction { DetA, Factor1, Factor2 };

inline double boundary_function_value(const ConstraintSystem& sys, const WorkingMode& wm,
                                      const HomeLine& line, double t, BoundaryFunction fn) {
    const Pose p = line.at(t);
    const JointInput q = inverse_kinematics(sys, p, wm);
    if (fn == BoundaryFunction::DetA) {
        return jacobians_unchecked(sys, p, q).detA();
    }
    const auto f = parallel_factor_values(sys, p, q);
    return f.at(fn == BoundaryFunction::Factor1 ? 0 : 1);
}

template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NoSignChangeError();
    }
    while (hi - lo > tol) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2.0;
}

inline double find_boundary_root(const ConstraintSystem& sys, const WorkingMode& wm,
                                 const HomeLine& line, double lo, double hi,
                                 BoundaryFunction fn = BoundaryFunction::DetA) {
    return bisect([&](double t) { return boundary_function_value(sys, wm, line, t, fn); }, lo, hi);
}

struct LineSample {
    double t = 0.0;
    int aspect_id = -1;
};

struct TransitionEntry {
    Mode mode = Mode::Two;
    WorkingMode wm;
    HomeLine line;
    std::string constraints;
    std::vector<int> reachable_aspects;
    std::vector<double> boundaries;
    std::vector<LineSample> samples;
    std::size_t aspect_count = 0;
};

struct TransitionReport {
    Preset preset = Preset::Consistent;
    int resolution = 0;
    std::vector<TransitionEntry> entries;
};

// Working modes used for the transition sweep. Mode 4 defaults to a branch
// with sigma2 != sigma3: with equal signs its first factor has no root on
// the home line.
struct TransitionOptions {
    int resolution = 256;
    std::array<WorkingMode, 3> wm{WorkingMode{{1, 1, 1}}, WorkingMode{{1, 1, 1}},
                                  WorkingMode{{1, 1, -1}}};
    unsigned threads = 0;
    int edge_samples = 7;
    Tolerances tol{};
};

inline TransitionEntry transition_entry(const ConstraintSystem& sys, const WorkingMode& wm,
                                        const TransitionOptions& opts = {}) {
    TransitionEntry e;
    e.mode = sys.mode;
    e.wm = wm;
    e.line = home_line(sys.mode);
    e.constraints = sys.mode == Mode::Four ? "x = 0, alpha = 0" : "z = 0, alpha = 0";

    GridSpec spec = workspace_spec(sys.mode, wm, opts.resolution);
    spec.threads = opts.threads;
    spec.edge_samples = opts.edge_samples;
    spec.tol = opts.tol;
    GridMap map = workspace_map(sys, spec);
    e.aspect_count = label_aspects(map).count();

    // Row of the periodic axis closest to alpha = 0.
    int row = 0;
    for (int j = 1; j < map.n2(); ++j) {
        if (std::abs(map.spec.axis2.value(j)) < std::abs(map.spec.axis2.value(row))) {
            row = j;
        }
    }
    for (int i = 0; i < map.n1(); ++i) {
        const int id = map.at(i, row).aspect_id;
        e.samples.push_back({map.spec.axis1.value(i), id});
        if (id >= 0 && std::find(e.reachable_aspects.begin(), e.reachable_aspects.end(), id) ==
                           e.reachable_aspects.end()) {
            e.reachable_aspects.push_back(id);
        }
    }
    std::sort(e.reachable_aspects.begin(), e.reachable_aspects.end());

    // Bracket det A sign changes between consecutive reachable samples.
    bool have_prev = false;
    double prev_t = 0.0;
    double prev_d = 0.0;
    for (int i = 0; i < map.n1(); ++i) {
        const double t = map.spec.axis1.value(i);
        const IkSolution ik = solve_ik(sys, e.line.at(t), wm);
        if (!ik.reachable) {
            have_prev = false;
            continue;
        }
        const double d = jacobians_unchecked(sys, e.line.at(t), ik.joints).detA();
        if (have_prev && ((prev_d > 0.0) != (d > 0.0)) && prev_d != 0.0 && d != 0.0) {
            e.boundaries.push_back(find_boundary_root(sys, wm, e.line, prev_t, t));
        }
        have_prev = true;
        prev_t = t;
        prev_d = d;
    }
    return e;
}

inline TransitionReport transition_report(const DesignParams& params, Preset preset,
                                          const TransitionOptions& opts = {}) {
    TransitionReport r;
    r.preset = preset;
    r.resolution = opts.resolution;
    for (Mode m : {Mode::Two, Mode::Three, Mode::Four}) {
        const auto sys = build_system(m, params, preset);
        r.entries.push_back(
            transition_entry(sys, opts.wm[static_cast<std::size_t>(mode_id(m) - 2)], opts));
    }
    return r;
}

} // namespace pipir
