#include <set>
#include <sstream>
#include <tuple>

#include <gtest/gtest.h>

#include "linkpred/errors.hpp"
#include "linkpred/ingestion.hpp"
#include "linkpred/tvc_generator.hpp"

using namespace linkpred;

namespace {

TvcParams small(std::uint64_t seed)
{
    TvcParams p;
    p.node_count = 12;
    p.area_edge = 300;
    p.community_edge = 80;
    p.radio_range = 60;
    p.epoch_duration = 120;
    p.duration = 900;
    p.seed = seed;
    return p;
}

std::string contacts_text(const TvcTrace& t)
{
    std::ostringstream os;
    write_contacts(os, t.contacts, t.nodes);
    return os.str();
}

std::string visits_text(const TvcTrace& t)
{
    std::ostringstream os;
    write_visits(os, t.visits, t.nodes, t.locations);
    return os.str();
}

}  // namespace

TEST(TvcParams, DefaultsValid)
{
    TvcParams p;
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.area_edge, 1000.0);
    EXPECT_EQ(p.node_count, 100u);
    EXPECT_EQ(p.radio_range, 75.0);
    EXPECT_EQ(p.community_count, 2u);
    EXPECT_EQ(p.v_min, 5.0);
    EXPECT_EQ(p.v_max, 15.0);
}

TEST(TvcParams, Invalid)
{
    auto bad = [](auto mutate) {
        TvcParams p;
        mutate(p);
        return p;
    };
    EXPECT_THROW(bad([](TvcParams& p) { p.v_min = 20; }).validate(), InvalidArgument);
    EXPECT_THROW(bad([](TvcParams& p) { p.v_min = -1; }).validate(), InvalidArgument);
    EXPECT_THROW(bad([](TvcParams& p) { p.p_switch = 0.8, p.p_roam = 0.3; }).validate(), InvalidArgument);
    EXPECT_THROW(bad([](TvcParams& p) { p.p_roam = -0.1; }).validate(), InvalidArgument);
    EXPECT_THROW(bad([](TvcParams& p) { p.radio_range = 1000; }).validate(), InvalidArgument);
    EXPECT_THROW(bad([](TvcParams& p) { p.community_edge = 1001; }).validate(), InvalidArgument);
    EXPECT_THROW(bad([](TvcParams& p) { p.community_count = 0; }).validate(), InvalidArgument);
    EXPECT_THROW(bad([](TvcParams& p) { p.tick = 0; }).validate(), InvalidArgument);
    EXPECT_THROW(generate(bad([](TvcParams& p) { p.v_max = 1; })), InvalidArgument);
}

TEST(TvcParams, ConfigRoundTrip)
{
    TvcParams p = small(77);
    p.shared_communities = true;
    p.p_roam = 0.125;
    std::istringstream in(format_tvc_config(p));
    TvcParams q = parse_tvc_config(in);
    EXPECT_EQ(format_tvc_config(q), format_tvc_config(p));
    EXPECT_EQ(q.seed, 77u);
    EXPECT_TRUE(q.shared_communities);
}

TEST(TvcParams, ConfigErrors)
{
    std::istringstream unknown("# c\nwarp = 9\n");
    EXPECT_THROW(parse_tvc_config(unknown), ParseError);
    std::istringstream no_eq("seed 4\n");
    EXPECT_THROW(parse_tvc_config(no_eq), ParseError);
    std::istringstream bad_num("seed = x\n");
    EXPECT_THROW(parse_tvc_config(bad_num), ParseError);
}

TEST(AssignPreferences, BoxesInsideArea)
{
    TvcParams p;
    auto prefs = assign_preferences(p, 42);
    ASSERT_EQ(prefs.size(), 100u);
    for (const auto& node : prefs) {
        ASSERT_EQ(node.size(), 2u);
        for (const auto& b : node) {
            EXPECT_GE(b.corner.x, 0.0);
            EXPECT_GE(b.corner.y, 0.0);
            EXPECT_LE(b.corner.x + b.edge, p.area_edge);
            EXPECT_LE(b.corner.y + b.edge, p.area_edge);
            EXPECT_EQ(b.edge, p.community_edge);
        }
    }
}

TEST(AssignPreferences, SingleCommunity)
{
    TvcParams p;
    p.community_count = 1;
    for (const auto& node : assign_preferences(p, 1))
        EXPECT_EQ(node.size(), 1u);
}

TEST(AssignPreferences, Deterministic)
{
    TvcParams p;
    auto a = assign_preferences(p, 5), b = assign_preferences(p, 5), c = assign_preferences(p, 6);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].size(); ++k) {
            EXPECT_EQ(a[i][k].corner.x, b[i][k].corner.x);
            EXPECT_EQ(a[i][k].corner.y, b[i][k].corner.y);
            differs |= a[i][k].corner.x != c[i][k].corner.x;
        }
    EXPECT_TRUE(differs);
}

TEST(AssignPreferences, SharedCommunities)
{
    TvcParams p;
    p.shared_communities = true;
    auto prefs = assign_preferences(p, 3);
    for (const auto& node : prefs)
        for (std::size_t k = 0; k < node.size(); ++k) {
            EXPECT_EQ(node[k].corner.x, prefs[0][k].corner.x);
            EXPECT_EQ(node[k].corner.y, prefs[0][k].corner.y);
        }
}

TEST(Generate, PinnedPairIsOneContact)
{
    TvcParams p;
    p.node_count = 2;
    p.v_min = p.v_max = 0;
    p.community_count = 1;
    p.community_edge = 0;
    p.shared_communities = true;
    p.duration = 600;
    auto t = generate(p);
    ASSERT_EQ(t.contacts.size(), 1u);
    EXPECT_EQ(t.contacts[0], (ContactEvent{0, 1, 0, 600}));
}

TEST(Generate, SingleNode)
{
    TvcParams p;
    p.node_count = 1;
    p.duration = 600;
    auto t = generate(p);
    EXPECT_TRUE(t.contacts.empty());
    EXPECT_FALSE(t.visits.empty());
}

TEST(Generate, DeterministicPerSeed)
{
    TvcParams p;
    p.duration = 1800;
    auto a = generate(p), b = generate(p);
    EXPECT_EQ(a.contacts.size(), b.contacts.size());
    EXPECT_EQ(contacts_text(a), contacts_text(b));
    EXPECT_EQ(visits_text(a), visits_text(b));
    p.seed = 43;
    EXPECT_NE(contacts_text(generate(p)), contacts_text(a));
}

TEST(Generate, IntervalsInsideDuration)
{
    for (std::uint64_t seed : {1, 2, 3}) {
        auto p = small(seed);
        auto t = generate(p);
        EXPECT_FALSE(t.contacts.empty());
        for (const auto& c : t.contacts) {
            EXPECT_LT(c.a, c.b);
            EXPECT_GE(c.start, 0.0);
            EXPECT_LE(c.end, p.duration);
            EXPECT_LE(c.start, c.end);
        }
        for (const auto& v : t.visits) {
            EXPECT_GE(v.start, 0.0);
            EXPECT_LE(v.end, p.duration);
            EXPECT_LT(v.location, p.community_count);
        }
    }
}

// Replays the simulation tick by tick and checks that the emitted intervals
// are exactly the maximal in-range runs.
TEST(Generate, ContactsMatchReplayedDistances)
{
    for (std::uint64_t seed : {4, 5}) {
        auto p = small(seed);
        p.p_roam = 0.3;
        auto t = generate(p);

        std::set<std::tuple<NodeIndex, NodeIndex, std::size_t>> from_trace, from_sim;
        for (const auto& c : t.contacts)
            for (auto k = static_cast<std::size_t>(c.start / p.tick); k <= static_cast<std::size_t>(c.end / p.tick);
                 ++k)
                ASSERT_TRUE(from_trace.emplace(c.a, c.b, k).second) << "overlapping runs";
        std::set<std::tuple<NodeIndex, std::size_t, std::size_t>> visits_trace, visits_sim;
        for (const auto& v : t.visits)
            for (auto k = static_cast<std::size_t>(v.start / p.tick); k <= static_cast<std::size_t>(v.end / p.tick);
                 ++k)
                visits_trace.emplace(v.node, v.location, k);

        TvcSimulator sim(p);
        const double r = p.radio_range;
        for (std::size_t k = 0;; ++k) {
            const auto& pos = sim.positions();
            for (NodeIndex a = 0; a < p.node_count; ++a) {
                ASSERT_GE(pos[a].x, 0.0);
                ASSERT_LE(pos[a].x, p.area_edge);
                ASSERT_GE(pos[a].y, 0.0);
                ASSERT_LE(pos[a].y, p.area_edge);
                for (NodeIndex b = a + 1; b < p.node_count; ++b)
                    if (std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y) <= r)
                        from_sim.emplace(a, b, k);
                const auto loc = sim.visiting(a);
                if (loc != kRoaming)
                    visits_sim.emplace(a, loc, k);
            }
            if (k == sim.last_tick())
                break;
            sim.advance();
        }
        EXPECT_EQ(from_trace, from_sim);
        EXPECT_EQ(visits_trace, visits_sim);
    }
}

TEST(Generate, ContactRunsAreMaximal)
{
    auto t = generate(small(8));
    std::set<std::tuple<NodeIndex, NodeIndex, double>> ends;
    for (const auto& c : t.contacts)
        ends.emplace(c.a, c.b, c.end);
    for (const auto& c : t.contacts)
        EXPECT_EQ(ends.count({c.a, c.b, c.start - 1.0}), 0u) << "adjacent runs should have merged";
}

TEST(Generate, VisitsNeverOverlapPerNode)
{
    auto p = small(9);
    p.community_count = 3;
    p.community_edge = 200;
    auto t = generate(p);
    std::vector<double> last_end(p.node_count, -1);
    auto v = t.visits;
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return std::tie(x.node, x.start) < std::tie(y.node, y.start); });
    for (const auto& x : v) {
        EXPECT_GT(x.start, last_end[x.node]);
        last_end[x.node] = x.end;
    }
}

TEST(Generate, ExplicitFourHourHorizon)
{
    TvcParams p;
    p.node_count = 10;
    p.duration = 14400;
    auto t = generate(p);
    double last = 0;
    for (const auto& v : t.visits)
        last = std::max(last, v.end);
    for (const auto& c : t.contacts)
        last = std::max(last, c.end);
    EXPECT_LE(last, 14400.0);
    TvcSimulator sim(p);
    EXPECT_EQ(sim.last_tick(), 14400u);
}
