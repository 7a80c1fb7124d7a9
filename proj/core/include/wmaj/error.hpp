#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wmaj
{

enum class errc
{
  length_mismatch,
  unresolved_tie,
  too_large,
  index_out_of_range,
  unsupported,
  degenerate_marginal,
  malformed_lp,
  not_monotone,
  not_antisymmetric,
  not_applicable,
  verification_failed,
  not_transitive,
  not_invariant,
  bad_seed_vector,
  invalid_input,
  hypothesis_violated,
  out_of_regime,
  invalid_params,
  degenerate_stratum,
  parse_error,
};

std::string_view to_string( errc code ) noexcept;

/*! \brief Exception type thrown by every operation in the library.

  The code identifies the failure class; `what()` carries a diagnostic that
  names the offending value.
*/
class error : public std::runtime_error
{
public:
  error( errc code, const std::string& message )
      : std::runtime_error( std::string( to_string( code ) ) + ": " + message ), code_( code ), message_( message )
  {
  }

  errc code() const noexcept { return code_; }
  /*! The diagnostic without the code prefix. */
  const std::string& message() const noexcept { return message_; }

private:
  errc code_;
  std::string message_;
};

} // namespace wmaj
