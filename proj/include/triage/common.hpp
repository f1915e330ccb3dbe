#pragma once

#include <array>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace triage {

using DeveloperId = std::string;
using Timestamp = std::chrono::sys_seconds;

/// Raised for malformed or inconsistent input data (bad JSON, duplicate ids,
/// unparseable timestamps, unreadable files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recommendation sources. The first three are the base approaches and double
/// as the class labels of the approach classifier.
enum class Approach { Freq = 0, TextSim = 1, L2R = 2, Lupin = 3, Oracle = 4 };

inline constexpr std::size_t kBaseApproachCount = 3;
inline constexpr std::array<Approach, kBaseApproachCount> kBaseApproaches{
    Approach::Freq, Approach::TextSim, Approach::L2R};

std::string_view to_string(Approach a);
/// Accepts the lowercase names used on the command line ("freq", "textsim",
/// "l2r", "lupin", "oracle") case-insensitively.
std::optional<Approach> parse_approach(std::string_view name);

/// RFC 3339 date-time ("2020-10-01T12:30:00Z", optional fraction, "Z" or
/// "+hh:mm" offset). Fractional seconds are truncated.
Timestamp parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp t);

}  // namespace triage
