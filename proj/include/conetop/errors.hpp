// Error codes and the exception type used across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace conetop {

enum class errc {
  non_monotone,       // breakpoints not strictly increasing
  empty_domain,       // fewer than two breakpoints
  out_of_domain,      // evaluation outside a map's domain
  domain_mismatch,    // composition has no usable common interval
  non_positive_r,     // margin parameter must be positive
  invalid_r,          // margin parameter out of its admissible range
  invalid_k,          // interlacing depth out of range
  wrong_graph,        // map refers to a different base graph
  non_pl,             // edge reparametrization is not an increasing PL bijection
  wrong_base,         // base point does not belong to the graph
  ambient_mismatch,   // operation needs both objects over one ambient space
  offset_too_large,   // radial offset function leaves the admissible band
  target_too_shallow, // recenter target has no room for an interlaced chart
  not_interlaced,     // chart pair fails the required interlacing
  outside_chart,      // point not in the chart's image
  shift_out_of_range, // radial shift would leave the chart
  vertex_input,       // operation undefined at a cone vertex
  unsupported,        // construction not available on this ambient
  base_too_small,     // base has too few points for the construction
  endpoint_in_f,      // path endpoint lies in the forbidden set
  chain_broken,       // chain step exceeds the verified move radius
  chart_meets_f,      // chart image intersects the forbidden set
  duplicate_point,    // tuple for strong homogeneity repeats a point
  unsupported_ambient,// scenario names an ambient kind the tool lacks
  parse_error,        // scenario file is malformed
  unknown_reference,  // scenario refers to an undefined object
  command_failed,     // scenario command could not run
  internal,           // invariant violation inside the library
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_monotone: return "NonMonotone";
    case errc::empty_domain: return "EmptyDomain";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::non_positive_r: return "NonPositiveR";
    case errc::invalid_r: return "InvalidR";
    case errc::invalid_k: return "InvalidK";
    case errc::wrong_graph: return "WrongGraph";
    case errc::non_pl: return "NonPL";
    case errc::wrong_base: return "WrongBase";
    case errc::ambient_mismatch: return "AmbientMismatch";
    case errc::offset_too_large: return "OffsetTooLarge";
    case errc::target_too_shallow: return "TargetTooShallow";
    case errc::not_interlaced: return "NotInterlaced";
    case errc::outside_chart: return "OutsideChart";
    case errc::shift_out_of_range: return "ShiftOutOfRange";
    case errc::vertex_input: return "VertexInput";
    case errc::unsupported: return "Unsupported";
    case errc::base_too_small: return "BaseTooSmall";
    case errc::endpoint_in_f: return "EndpointInF";
    case errc::chain_broken: return "ChainBroken";
    case errc::chart_meets_f: return "ChartMeetsF";
    case errc::duplicate_point: return "DuplicatePoint";
    case errc::unsupported_ambient: return "UnsupportedAmbient";
    case errc::parse_error: return "ParseError";
    case errc::unknown_reference: return "UnknownReference";
    case errc::command_failed: return "CommandFailed";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& what) {
  throw error(c, what);
}

} // namespace conetop
