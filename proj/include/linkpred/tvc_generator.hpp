#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "linkpred/trace_model.hpp"

namespace linkpred {

/// Time-variant community mobility parameters. Defaults reproduce the
/// 1000 m / 100 node / 75 m / 2 community / 5-15 m/s scenario. Box edge,
/// epoch length, tick and switching probabilities are unpublished; the
/// values here keep nodes mostly in one community with rare roaming.
struct TvcParams {
    double area_edge = 1000.0;
    std::size_t node_count = 100;
    double radio_range = 75.0;
    std::size_t community_count = 2;
    double v_min = 5.0;
    double v_max = 15.0;
    double p_switch = 0.3;
    double p_roam = 0.01;
    double community_edge = 250.0;
    double epoch_duration = 3600.0;
    double tick = 1.0;
    double duration = 18000.0;
    std::uint64_t seed = 42;
    /// Place one set of community boxes shared by every node instead of
    /// per-node boxes.
    bool shared_communities = false;

    void validate() const;  // throws InvalidArgument
};

/// Sets one parameter from its key=value spelling (keys match the field
/// names). Throws InvalidArgument on unknown keys or bad values.
void set_tvc_param(TvcParams& params, std::string_view key, std::string_view value);

/// Reads `key = value` lines; blank lines and '#' comments are skipped.
TvcParams parse_tvc_config(std::istream& in, TvcParams base = {});

/// Every field as `key = value`, one per line, readable by parse_tvc_config.
std::string format_tvc_config(const TvcParams& params);

struct Point {
    double x = 0;
    double y = 0;
};

/// Axis-aligned square [x, x+edge] x [y, y+edge].
struct Box {
    Point corner;
    double edge = 0;

    bool contains(Point p) const
    {
        return p.x >= corner.x && p.x <= corner.x + edge && p.y >= corner.y && p.y <= corner.y + edge;
    }
};

/// Per node, its community boxes in preference order.
using Preferences = std::vector<std::vector<Box>>;

Preferences assign_preferences(const TvcParams& params, std::uint64_t seed);

/// Mode index c < community_count means "in community c"; kRoaming means
/// the whole area is the waypoint region.
inline constexpr std::size_t kRoaming = static_cast<std::size_t>(-1);

/// Tick-stepped random-waypoint simulation. Exposed so tests can replay
/// positions against emitted contacts.
class TvcSimulator {
public:
    explicit TvcSimulator(const TvcParams& params);

    std::size_t tick_index() const noexcept { return tick_; }
    double time() const noexcept { return static_cast<double>(tick_) * params_.tick; }
    std::size_t last_tick() const noexcept { return last_tick_; }
    const std::vector<Point>& positions() const noexcept { return pos_; }
    const std::vector<std::size_t>& modes() const noexcept { return mode_; }
    const Preferences& preferences() const noexcept { return prefs_; }

    /// Community the node is visiting at the current tick: its mode is that
    /// community and it is inside the box. Returns kRoaming otherwise.
    std::size_t visiting(NodeIndex node) const;

    /// Moves every node by one tick and applies epoch-boundary mode changes.
    void advance();

private:
    double uniform();
    Point random_point(const Box& region);
    void retarget(NodeIndex node);
    const Box& region_of(NodeIndex node) const;

    TvcParams params_;
    Preferences prefs_;
    Box area_;
    std::mt19937_64 rng_;
    std::size_t tick_ = 0;
    std::size_t last_tick_ = 0;
    std::size_t ticks_per_epoch_ = 0;
    std::vector<Point> pos_;
    std::vector<Point> waypoint_;
    std::vector<double> speed_;
    std::vector<std::size_t> mode_;
};

struct TvcTrace {
    std::vector<ContactEvent> contacts;
    std::vector<LocationVisit> visits;
    NodeRegistry nodes;          // "n0", "n1", ... in index order
    LocationRegistry locations;  // "c0", "c1", ... in community order
};

/// Contacts are maximal runs of ticks with distance <= radio_range, as
/// closed intervals [first_tick, last_tick] in seconds; visits likewise.
TvcTrace generate(const TvcParams& params);

}  // namespace linkpred
