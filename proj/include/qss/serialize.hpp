#pragma once

#include <iosfwd>
#include <string>

#include "qss/protocol.hpp"

namespace qss {

// Plain-text transcript: a short header, one line per classical announcement
// event in policy order, then one summary line per round. Byte-identical
// across runs with the same config.
void write_transcript(std::ostream& os, const Transcript& t);
std::string transcript_text(const Transcript& t);

// Pretty-printed JSON run report, schema "qss-report/1".
std::string report_json(const Transcript& t);
void write_report(std::ostream& os, const Transcript& t);

}  // namespace qss
