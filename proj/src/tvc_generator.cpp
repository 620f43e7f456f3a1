#include "linkpred/tvc_generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <tuple>

#include "linkpred/errors.hpp"

namespace linkpred {

void TvcParams::validate() const
{
    auto fail = [](const std::string& what) { throw InvalidArgument("invalid TVC parameters: " + what); };
    if (!(area_edge > 0) || !std::isfinite(area_edge))
        fail("area_edge must be positive");
    if (!(radio_range >= 0) || !(radio_range < area_edge))
        fail("radio_range must lie in [0, area_edge)");
    if (community_count < 1)
        fail("community_count must be >= 1");
    // Zero speed is accepted so that nodes can be pinned in place.
    if (!(v_min >= 0) || !(v_min <= v_max) || !std::isfinite(v_max))
        fail("speeds must satisfy 0 <= v_min <= v_max");
    if (!(p_switch >= 0 && p_switch <= 1) || !(p_roam >= 0 && p_roam <= 1) || p_switch + p_roam > 1 + 1e-12)
        fail("p_switch, p_roam must be probabilities with p_switch + p_roam <= 1");
    if (!(community_edge >= 0) || community_edge > area_edge)
        fail("community boxes must fit inside the area");
    if (!(tick > 0) || !std::isfinite(tick))
        fail("tick must be positive");
    if (!(epoch_duration >= tick) || !std::isfinite(epoch_duration))
        fail("epoch_duration must be at least one tick");
    if (!(duration >= 0) || !std::isfinite(duration) || duration / tick > 1e9)
        fail("duration must be non-negative and at most 1e9 ticks");
}

namespace {

double parse_double(std::string_view key, std::string_view v)
{
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out, std::chars_format::general);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw InvalidArgument("bad value for '" + std::string(key) + "': " + std::string(v));
    return out;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v)
{
    Int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw InvalidArgument("bad value for '" + std::string(key) + "': " + std::string(v));
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::uint64_t uniform_bits_seed(std::uint64_t seed)
{
    // splitmix64 finalizer; decorrelates the motion stream from the placement stream
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void set_tvc_param(TvcParams& p, std::string_view key, std::string_view value)
{
    value = trim(value);
    if (key == "area_edge") p.area_edge = parse_double(key, value);
    else if (key == "node_count") p.node_count = parse_int<std::size_t>(key, value);
    else if (key == "radio_range") p.radio_range = parse_double(key, value);
    else if (key == "community_count") p.community_count = parse_int<std::size_t>(key, value);
    else if (key == "v_min") p.v_min = parse_double(key, value);
    else if (key == "v_max") p.v_max = parse_double(key, value);
    else if (key == "p_switch") p.p_switch = parse_double(key, value);
    else if (key == "p_roam") p.p_roam = parse_double(key, value);
    else if (key == "community_edge") p.community_edge = parse_double(key, value);
    else if (key == "epoch_duration") p.epoch_duration = parse_double(key, value);
    else if (key == "tick") p.tick = parse_double(key, value);
    else if (key == "duration") p.duration = parse_double(key, value);
    else if (key == "seed") p.seed = parse_int<std::uint64_t>(key, value);
    else if (key == "shared_communities") {
        if (value == "true" || value == "1") p.shared_communities = true;
        else if (value == "false" || value == "0") p.shared_communities = false;
        else throw InvalidArgument("bad value for 'shared_communities': " + std::string(value));
    }
    else throw InvalidArgument("unknown TVC parameter '" + std::string(key) + "'");
}

TvcParams parse_tvc_config(std::istream& in, TvcParams base)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto s = trim(line);
        if (s.empty() || s.front() == '#')
            continue;
        auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(lineno, "expected key=value");
        try {
            set_tvc_param(base, trim(s.substr(0, eq)), s.substr(eq + 1));
        } catch (const InvalidArgument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return base;
}

std::string format_tvc_config(const TvcParams& p)
{
    auto real = [](double v) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ec == std::errc() ? ptr : buf);
    };
    std::string out;
    auto line = [&](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
    line("area_edge", real(p.area_edge));
    line("node_count", std::to_string(p.node_count));
    line("radio_range", real(p.radio_range));
    line("community_count", std::to_string(p.community_count));
    line("v_min", real(p.v_min));
    line("v_max", real(p.v_max));
    line("p_switch", real(p.p_switch));
    line("p_roam", real(p.p_roam));
    line("community_edge", real(p.community_edge));
    line("epoch_duration", real(p.epoch_duration));
    line("tick", real(p.tick));
    line("duration", real(p.duration));
    line("seed", std::to_string(p.seed));
    line("shared_communities", p.shared_communities ? "true" : "false");
    return out;
}

Preferences assign_preferences(const TvcParams& params, std::uint64_t seed)
{
    if (params.community_count < 1)
        throw InvalidArgument("community_count must be >= 1");
    std::mt19937_64 rng(seed);
    const double span = params.area_edge - params.community_edge;
    auto place = [&] {
        double x = unit(rng) * span;
        double y = unit(rng) * span;
        return Box{{x, y}, params.community_edge};
    };

    Preferences prefs(params.node_count);
    if (params.shared_communities) {
        std::vector<Box> shared;
        for (std::size_t c = 0; c < params.community_count; ++c)
            shared.push_back(place());
        std::fill(prefs.begin(), prefs.end(), shared);
        return prefs;
    }
    for (auto& boxes : prefs)
        for (std::size_t c = 0; c < params.community_count; ++c)
            boxes.push_back(place());
    return prefs;
}

TvcSimulator::TvcSimulator(const TvcParams& params)
    : params_(params), rng_(uniform_bits_seed(params.seed))
{
    params_.validate();
    prefs_ = assign_preferences(params_, params_.seed);
    area_ = Box{{0, 0}, params_.area_edge};
    last_tick_ = static_cast<std::size_t>(std::floor(params_.duration / params_.tick + 1e-9));
    ticks_per_epoch_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params_.epoch_duration / params_.tick)));

    const std::size_t n = params_.node_count;
    pos_.resize(n);
    waypoint_.resize(n);
    speed_.resize(n);
    mode_.assign(n, 0);
    for (NodeIndex i = 0; i < n; ++i) {
        pos_[i] = random_point(prefs_[i][0]);
        retarget(i);
    }
}

double TvcSimulator::uniform()
{
    return unit(rng_);
}

Point TvcSimulator::random_point(const Box& region)
{
    double x = region.corner.x + uniform() * region.edge;
    double y = region.corner.y + uniform() * region.edge;
    return {x, y};
}

const Box& TvcSimulator::region_of(NodeIndex node) const
{
    return mode_[node] == kRoaming ? area_ : prefs_[node][mode_[node]];
}

void TvcSimulator::retarget(NodeIndex node)
{
    waypoint_[node] = random_point(region_of(node));
    speed_[node] = params_.v_min + (params_.v_max - params_.v_min) * uniform();
}

std::size_t TvcSimulator::visiting(NodeIndex node) const
{
    std::size_t m = mode_[node];
    if (m == kRoaming || !prefs_[node][m].contains(pos_[node]))
        return kRoaming;
    return m;
}

void TvcSimulator::advance()
{
    ++tick_;
    for (NodeIndex i = 0; i < pos_.size(); ++i) {
        double dx = waypoint_[i].x - pos_[i].x;
        double dy = waypoint_[i].y - pos_[i].y;
        double dist = std::hypot(dx, dy);
        double step = speed_[i] * params_.tick;
        if (dist <= step) {
            pos_[i] = waypoint_[i];
            if (step > 0)
                retarget(i);
        } else {
            pos_[i].x += dx / dist * step;
            pos_[i].y += dy / dist * step;
        }
    }
    if (tick_ % ticks_per_epoch_ != 0)
        return;
    const double p_go = params_.p_switch;
    const double p_go_or_roam = params_.p_switch + params_.p_roam;
    for (NodeIndex i = 0; i < pos_.size(); ++i) {
        double u = uniform();
        if (u < p_go) {
            auto c = static_cast<std::size_t>(uniform() * static_cast<double>(params_.community_count));
            mode_[i] = std::min(c, params_.community_count - 1);
            retarget(i);
        } else if (u < p_go_or_roam) {
            mode_[i] = kRoaming;
            retarget(i);
        }
    }
}

TvcTrace generate(const TvcParams& params)
{
    TvcSimulator sim(params);
    const std::size_t n = params.node_count;
    const double r2 = params.radio_range * params.radio_range;
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    TvcTrace out;
    for (std::size_t i = 0; i < n; ++i)
        out.nodes.intern("n" + std::to_string(i));
    for (std::size_t c = 0; c < params.community_count; ++c)
        out.locations.intern("c" + std::to_string(c));

    auto seconds = [&](std::size_t k) { return static_cast<double>(k) * params.tick; };
    std::vector<std::size_t> open_contact(n * (n > 0 ? n - 1 : 0) / 2, kNone);
    std::vector<std::size_t> open_visit(n, kNone);
    std::vector<std::size_t> visit_loc(n, kRoaming);

    const std::size_t last = sim.last_tick();
    for (std::size_t k = 0;; ++k) {
        const auto& pos = sim.positions();
        std::size_t pair = 0;
        for (NodeIndex a = 0; a < n; ++a) {
            for (NodeIndex b = a + 1; b < n; ++b, ++pair) {
                double dx = pos[a].x - pos[b].x;
                double dy = pos[a].y - pos[b].y;
                bool near = dx * dx + dy * dy <= r2;
                if (near && open_contact[pair] == kNone) {
                    open_contact[pair] = k;
                } else if (!near && open_contact[pair] != kNone) {
                    out.contacts.push_back({a, b, seconds(open_contact[pair]), seconds(k - 1)});
                    open_contact[pair] = kNone;
                }
            }
        }
        for (NodeIndex i = 0; i < n; ++i) {
            std::size_t loc = sim.visiting(i);
            if (open_visit[i] != kNone && loc != visit_loc[i]) {
                out.visits.push_back({i, visit_loc[i], seconds(open_visit[i]), seconds(k - 1)});
                open_visit[i] = kNone;
            }
            if (open_visit[i] == kNone && loc != kRoaming) {
                open_visit[i] = k;
                visit_loc[i] = loc;
            }
        }
        if (k == last)
            break;
        sim.advance();
    }

    std::size_t pair = 0;
    for (NodeIndex a = 0; a < n; ++a)
        for (NodeIndex b = a + 1; b < n; ++b, ++pair)
            if (open_contact[pair] != kNone)
                out.contacts.push_back({a, b, seconds(open_contact[pair]), seconds(last)});
    for (NodeIndex i = 0; i < n; ++i)
        if (open_visit[i] != kNone)
            out.visits.push_back({i, visit_loc[i], seconds(open_visit[i]), seconds(last)});

    std::sort(out.contacts.begin(), out.contacts.end(), [](const ContactEvent& x, const ContactEvent& y) {
        return std::tie(x.start, x.a, x.b, x.end) < std::tie(y.start, y.a, y.b, y.end);
    });
    std::sort(out.visits.begin(), out.visits.end(), [](const LocationVisit& x, const LocationVisit& y) {
        return std::tie(x.start, x.node, x.location, x.end) < std::tie(y.start, y.node, y.location, y.end);
    });
    return out;
}

}  // namespace linkpred
