#include "linkpred/ingestion.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "linkpred/errors.hpp"

namespace linkpred {

std::string format_seconds(double v)
{
    std::array<char, 400> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    if (ec != std::errc())
        throw Error("cannot format time value");
    return std::string(buf.data(), ptr);
}

bool parse_seconds(std::string_view text, double& out)
{
    if (text.empty() || text.front() == '+' || text.front() == '-')
        return false;
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, std::chars_format::general);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        return false;
    out = v;
    return true;
}

namespace {

struct Record {
    std::size_t line;
    std::array<std::string_view, 4> fields;
};

// Iterates data lines after validating the header; `fn` receives each
// record split into exactly four fields.
template <class Fn>
void for_each_record(std::istream& in, std::string_view header, Fn&& fn)
{
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        if (!have_header) {
            if (line != header)
                throw ParseError(lineno, "expected header '" + std::string(header) + "'");
            have_header = true;
            continue;
        }
        Record rec{lineno, {}};
        std::string_view rest(line);
        std::size_t count = 0;
        while (true) {
            auto comma = rest.find(',');
            if (count == rec.fields.size())
                throw ParseError(lineno, "wrong field count");
            rec.fields[count++] = rest.substr(0, comma);
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (count != rec.fields.size())
            throw ParseError(lineno, "wrong field count");
        for (std::size_t i = 0; i < 2; ++i)
            if (rec.fields[i].empty())
                throw ParseError(lineno, "empty id");
        fn(rec);
    }
    if (in.bad())
        throw Error("read failure");
    if (!have_header)
        throw ParseError(lineno + 1, "missing header '" + std::string(header) + "'");
}

void parse_interval(const Record& rec, double& start, double& end)
{
    if (!parse_seconds(rec.fields[2], start) || !parse_seconds(rec.fields[3], end))
        throw ParseError(rec.line, "non-numeric time");
    if (start > end)
        throw ParseError(rec.line, "start>end");
}

VisitTrace parse_visits_into(std::istream& in, NodeRegistry nodes)
{
    VisitTrace trace;
    trace.nodes = std::move(nodes);
    for_each_record(in, kVisitsHeader, [&](const Record& rec) {
        double s = 0, e = 0;
        parse_interval(rec, s, e);
        NodeIndex n = trace.nodes.intern(rec.fields[0]);
        LocationIndex loc = trace.locations.intern(rec.fields[1]);
        trace.visits.push_back({n, loc, s, e});
    });
    return trace;
}

}  // namespace

ContactTrace parse_contacts(std::istream& in)
{
    ContactTrace trace;
    for_each_record(in, kContactsHeader, [&](const Record& rec) {
        if (rec.fields[0] == rec.fields[1])
            throw ParseError(rec.line, "self-contact");
        double s = 0, e = 0;
        parse_interval(rec, s, e);
        NodeIndex a = trace.nodes.intern(rec.fields[0]);
        NodeIndex b = trace.nodes.intern(rec.fields[1]);
        trace.events.push_back(make_contact(a, b, s, e));
    });
    return trace;
}

VisitTrace parse_visits(std::istream& in)
{
    return parse_visits_into(in, NodeRegistry{});
}

VisitTrace parse_visits(std::istream& in, const NodeRegistry& nodes)
{
    return parse_visits_into(in, nodes);
}

void write_contacts(std::ostream& out, const std::vector<ContactEvent>& events, const NodeRegistry& nodes)
{
    out << kContactsHeader << '\n';
    for (const auto& ev : events)
        out << nodes.id_of(ev.a) << ',' << nodes.id_of(ev.b) << ',' << format_seconds(ev.start) << ','
            << format_seconds(ev.end) << '\n';
    if (!out)
        throw Error("write failure");
}

void write_visits(std::ostream& out, const std::vector<LocationVisit>& visits, const NodeRegistry& nodes,
                  const LocationRegistry& locations)
{
    out << kVisitsHeader << '\n';
    for (const auto& v : visits)
        out << nodes.id_of(v.node) << ',' << locations.id_of(v.location) << ',' << format_seconds(v.start) << ','
            << format_seconds(v.end) << '\n';
    if (!out)
        throw Error("write failure");
}

}  // namespace linkpred
