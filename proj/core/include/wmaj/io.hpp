#pragma once

#include "wmaj/boolfn.hpp"
#include "wmaj/classify.hpp"
#include "wmaj/measure.hpp"
#include "wmaj/power.hpp"
#include "wmaj/rational.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wmaj::io
{

using json = nlohmann::ordered_json;

/*! Reads a rational from a JSON string ("3/7", "0.25", "1e-2") or number.
    `field` names the value in diagnostics. */
rational rational_of( const json& value, const std::string& field );

/*! {"exact": "p/q", "decimal": "<12 significant digits>"}. */
json exact_value( const rational& value );

/*! \name Function description files */
/*!@{*/
json to_json( const bool_fn& f );
bool_fn function_from_json( const json& doc );
bool_fn load_function( const std::filesystem::path& path );
void save_function( const std::filesystem::path& path, const bool_fn& f );
/*!@}*/

/*! \name Measure description files */
/*!@{*/
json to_json( const measure& mu );
json to_json( const explicit_measure& mu );
measure measure_from_json( const json& doc );
measure load_measure( const std::filesystem::path& path );
void save_measure( const std::filesystem::path& path, const measure& mu );
/*!@}*/

json to_json( const classify_result& result );
json to_json( const power_report& report );

/*! A flat table of preformatted cells. */
struct table
{
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /*! Tab-separated, header first. */
  std::string to_tsv() const;
  /*! Array of objects keyed by column name. */
  json to_json() const;
};

/*! Real columns appear twice: `name` as a 12-digit decimal and `name_exact`
    as a rational. Variable indices are 1-based. */
table power_table( const power_report& report );

/*! Reads a whole file; throws InvalidInput naming the path when missing. */
std::string read_file( const std::filesystem::path& path );
void write_file( const std::filesystem::path& path, const std::string& text );

/*! Parses JSON text; throws ParseError with `origin` in the message. */
json parse( const std::string& text, const std::string& origin );

} // namespace wmaj::io
