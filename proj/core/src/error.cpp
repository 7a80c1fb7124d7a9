#include "wmaj/error.hpp"

namespace wmaj
{

std::string_view to_string( errc code ) noexcept
{
  switch ( code )
  {
  case errc::length_mismatch: return "LengthMismatch";
  case errc::unresolved_tie: return "UnresolvedTie";
  case errc::too_large: return "TooLarge";
  case errc::index_out_of_range: return "IndexOutOfRange";
  case errc::unsupported: return "Unsupported";
  case errc::degenerate_marginal: return "DegenerateMarginal";
  case errc::malformed_lp: return "MalformedLP";
  case errc::not_monotone: return "NotMonotone";
  case errc::not_antisymmetric: return "NotAntisymmetric";
  case errc::not_applicable: return "NotApplicable";
  case errc::verification_failed: return "VerificationFailed";
  case errc::not_transitive: return "NotTransitive";
  case errc::not_invariant: return "NotInvariant";
  case errc::bad_seed_vector: return "BadSeedVector";
  case errc::invalid_input: return "InvalidInput";
  case errc::hypothesis_violated: return "HypothesisViolated";
  case errc::out_of_regime: return "OutOfRegime";
  case errc::invalid_params: return "InvalidParams";
  case errc::degenerate_stratum: return "DegenerateStratum";
  case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

} // namespace wmaj
