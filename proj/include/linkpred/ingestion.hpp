#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "linkpred/trace_model.hpp"

namespace linkpred {

// Canonical trace files. First non-comment line is the header
// `version=1,kind=contacts` (or `kind=visits`); each further line is one
// record. Lines starting with '#' are ignored. No quoting, '\n' line ends.
inline constexpr std::string_view kContactsHeader = "version=1,kind=contacts";
inline constexpr std::string_view kVisitsHeader = "version=1,kind=visits";

struct ContactTrace {
    std::vector<ContactEvent> events;
    NodeRegistry nodes;
};

struct VisitTrace {
    std::vector<LocationVisit> visits;
    NodeRegistry nodes;
    LocationRegistry locations;
};

/// Records `node_a,node_b,start_seconds,end_seconds`. Throws ParseError
/// naming the offending 1-based line.
ContactTrace parse_contacts(std::istream& in);

/// Records `node,location,start_seconds,end_seconds`.
VisitTrace parse_visits(std::istream& in);

/// Same as parse_visits, but node ids are interned into `nodes` first, so
/// indices agree with a contact trace parsed earlier.
VisitTrace parse_visits(std::istream& in, const NodeRegistry& nodes);

void write_contacts(std::ostream& out, const std::vector<ContactEvent>& events, const NodeRegistry& nodes);
void write_visits(std::ostream& out, const std::vector<LocationVisit>& visits, const NodeRegistry& nodes,
                  const LocationRegistry& locations);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_seconds(double v);

/// Locale-independent decimal parse of a non-negative time; returns false
/// on any malformed input.
bool parse_seconds(std::string_view text, double& out);

}  // namespace linkpred
