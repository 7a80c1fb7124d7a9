#include "wmaj/io.hpp"

#include "wmaj/error.hpp"

#include <fstream>
#include <sstream>

namespace wmaj::io
{

namespace
{

[[noreturn]] void bad_field( const std::string& field, const std::string& what )
{
  throw error( errc::invalid_input, "field '" + field + "': " + what );
}

const json& member( const json& doc, const std::string& key, const std::string& where )
{
  if ( !doc.is_object() || !doc.contains( key ) )
  {
    bad_field( where.empty() ? key : where + "." + key, "missing" );
  }
  return doc.at( key );
}

int int_of( const json& doc, const std::string& key, const std::string& where )
{
  const auto& v = member( doc, key, where );
  if ( !v.is_number_integer() )
  {
    bad_field( where.empty() ? key : where + "." + key, "expected an integer" );
  }
  return v.get<int>();
}

std::string string_of( const json& doc, const std::string& key, const std::string& where )
{
  const auto& v = member( doc, key, where );
  if ( !v.is_string() )
  {
    bad_field( where.empty() ? key : where + "." + key, "expected a string" );
  }
  return v.get<std::string>();
}

json rational_list( const std::vector<rational>& values )
{
  json out = json::array();
  for ( const auto& v : values )
  {
    out.push_back( to_string( v ) );
  }
  return out;
}

std::vector<rational> rationals_of( const json& value, const std::string& field )
{
  if ( !value.is_array() )
  {
    bad_field( field, "expected an array" );
  }
  std::vector<rational> out;
  for ( std::size_t i = 0; i < value.size(); ++i )
  {
    out.push_back( rational_of( value[i], field + "[" + std::to_string( i ) + "]" ) );
  }
  return out;
}

json ties_to_json( const tie_table& ties )
{
  json out = json::object();
  for ( const auto& [x, v] : ties )
  {
    out[to_bitstring( x )] = v ? 1 : 0;
  }
  return out;
}

tie_table ties_of( const json& value, const std::string& field )
{
  if ( !value.is_object() )
  {
    bad_field( field, "expected an object keyed by bitstring" );
  }
  tie_table ties;
  for ( const auto& [key, v] : value.items() )
  {
    bitvec x;
    try
    {
      x = parse_bitstring( key );
    }
    catch ( const error& e )
    {
      bad_field( field + "." + key, e.message() );
    }
    if ( v.is_boolean() )
    {
      ties[x] = v.get<bool>();
    }
    else if ( v.is_number_integer() && ( v.get<int>() == 0 || v.get<int>() == 1 ) )
    {
      ties[x] = v.get<int>() == 1;
    }
    else
    {
      bad_field( field + "." + key, "expected 0/1 or a boolean" );
    }
  }
  return ties;
}

/* Re-raises construction errors with the document location prefixed. */
template<class F>
auto located( const std::string& where, F&& build )
{
  try
  {
    return build();
  }
  catch ( const error& e )
  {
    throw error( e.code(), "in '" + where + "': " + e.message() );
  }
}

bool_fn function_at( const json& doc, const std::string& where )
{
  const auto kind = string_of( doc, "kind", where );
  const auto at = [&]( const std::string& key ) { return where.empty() ? key : where + "." + key; };
  if ( kind == "truth_table" )
  {
    const auto bits_text = string_of( doc, "bits", where );
    std::vector<bool> bits;
    for ( char c : bits_text )
    {
      if ( c != '0' && c != '1' )
      {
        bad_field( at( "bits" ), "expected a 0/1 string" );
      }
      bits.push_back( c == '1' );
    }
    int n = 0;
    while ( n < 63 && ( std::size_t( 1 ) << n ) < bits.size() )
    {
      ++n;
    }
    if ( doc.contains( "n" ) )
    {
      n = int_of( doc, "n", where );
    }
    return located( at( "bits" ), [&] { return bool_fn::truth_table( n, std::move( bits ) ); } );
  }
  if ( kind == "weighted_majority" )
  {
    auto weights = rationals_of( member( doc, "weights", where ), at( "weights" ) );
    tie_table ties;
    if ( doc.contains( "ties" ) )
    {
      ties = ties_of( doc.at( "ties" ), at( "ties" ) );
    }
    return located( at( "weights" ), [&] { return bool_fn::weighted_majority( std::move( weights ), std::move( ties ) ); } );
  }
  if ( kind == "recursive_majority" )
  {
    const int k = int_of( doc, "k", where );
    const int levels = int_of( doc, "levels", where );
    return located( where.empty() ? "recursive_majority" : where, [&] { return bool_fn::recursive_majority( k, levels ); } );
  }
  if ( kind == "composed" )
  {
    auto outer = function_at( member( doc, "outer", where ), at( "outer" ) );
    const auto& list = member( doc, "inners", where );
    if ( !list.is_array() )
    {
      bad_field( at( "inners" ), "expected an array" );
    }
    std::vector<bool_fn> inners;
    for ( std::size_t i = 0; i < list.size(); ++i )
    {
      inners.push_back( function_at( list[i], at( "inners" ) + "[" + std::to_string( i ) + "]" ) );
    }
    return located( at( "inners" ), [&] { return bool_fn::composed( std::move( outer ), std::move( inners ) ); } );
  }
  bad_field( at( "kind" ), "unknown function kind '" + kind + "'" );
}

} // namespace

rational rational_of( const json& value, const std::string& field )
{
  std::string text;
  if ( value.is_string() )
  {
    text = value.get<std::string>();
  }
  else if ( value.is_number() )
  {
    text = value.dump();
  }
  else
  {
    bad_field( field, "expected a rational such as \"3/7\" or a number" );
  }
  try
  {
    return parse_rational( text );
  }
  catch ( const error& e )
  {
    bad_field( field, e.message() );
  }
}

json exact_value( const rational& value )
{
  return { { "exact", to_string( value ) }, { "decimal", to_decimal( value ) } };
}

json to_json( const bool_fn& f )
{
  return std::visit(
      [&]( const auto& r ) -> json {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, truth_table_repr> )
        {
          std::string bits;
          for ( bool b : r.bits )
          {
            bits.push_back( b ? '1' : '0' );
          }
          return { { "kind", "truth_table" }, { "n", r.n }, { "bits", bits } };
        }
        else if constexpr ( std::is_same_v<T, weighted_majority_repr> )
        {
          json out{ { "kind", "weighted_majority" }, { "weights", rational_list( r.weights ) } };
          if ( !r.ties.empty() )
          {
            out["ties"] = ties_to_json( r.ties );
          }
          return out;
        }
        else if constexpr ( std::is_same_v<T, recursive_majority_repr> )
        {
          return { { "kind", "recursive_majority" }, { "k", r.k }, { "levels", r.levels } };
        }
        else
        {
          json inners = json::array();
          for ( const auto& g : r.inners )
          {
            inners.push_back( to_json( g ) );
          }
          return { { "kind", "composed" }, { "outer", to_json( *r.outer ) }, { "inners", inners } };
        }
      },
      f.representation() );
}

bool_fn function_from_json( const json& doc )
{
  return function_at( doc, "" );
}

bool_fn load_function( const std::filesystem::path& path )
{
  const auto doc = parse( read_file( path ), path.string() );
  try
  {
    return function_from_json( doc );
  }
  catch ( const error& e )
  {
    throw error( e.code(), path.string() + ": " + e.message() );
  }
}

void save_function( const std::filesystem::path& path, const bool_fn& f )
{
  write_file( path, to_json( f ).dump( 2 ) + "\n" );
}

json to_json( const explicit_measure& mu )
{
  json mass = json::array();
  for ( const auto& [x, m] : mu.mass )
  {
    mass.push_back( json::array( { to_bitstring( point_of( x, mu.n ) ), to_string( m ) } ) );
  }
  return { { "kind", "explicit" }, { "n", mu.n }, { "mass", mass } };
}

json to_json( const measure& mu )
{
  return std::visit(
      [&]( const auto& r ) -> json {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, product_measure> )
        {
          return { { "kind", "product" }, { "p", rational_list( r.p ) } };
        }
        else if constexpr ( std::is_same_v<T, explicit_measure> )
        {
          return to_json( r );
        }
        else if constexpr ( std::is_same_v<T, tmixture_measure> )
        {
          return { { "kind", "tmixture" }, { "n", r.n }, { "eps", to_string( r.eps ) } };
        }
        else if constexpr ( std::is_same_v<T, all_same_measure> )
        {
          return { { "kind", "all_same" }, { "n", r.n }, { "p", to_string( r.p ) } };
        }
        else
        {
          return { { "kind", "ising_leaves" },
                   { "depth", r.depth },
                   { "eps", to_string( r.eps ) },
                   { "delta", to_string( r.delta ) } };
        }
      },
      mu.representation() );
}

measure measure_from_json( const json& doc )
{
  const auto kind = string_of( doc, "kind", "" );
  if ( kind == "product" )
  {
    const auto& p = member( doc, "p", "" );
    if ( p.is_array() )
    {
      auto ps = rationals_of( p, "p" );
      return located( "p", [&] { return measure::product( std::move( ps ) ); } );
    }
    const int n = int_of( doc, "n", "" );
    const auto pk = rational_of( p, "p" );
    return located( "p", [&] { return measure::uniform_product( n, pk ); } );
  }
  if ( kind == "explicit" )
  {
    const int n = int_of( doc, "n", "" );
    const auto& list = member( doc, "mass", "" );
    if ( !list.is_array() )
    {
      bad_field( "mass", "expected a list of [bitstring, mass] pairs" );
    }
    std::map<std::uint64_t, rational> mass;
    for ( std::size_t i = 0; i < list.size(); ++i )
    {
      const auto where = "mass[" + std::to_string( i ) + "]";
      const auto& pair = list[i];
      if ( !pair.is_array() || pair.size() != 2 || !pair[0].is_string() )
      {
        bad_field( where, "expected [bitstring, mass]" );
      }
      const auto x = located( where, [&] { return parse_bitstring( pair[0].get<std::string>() ); } );
      if ( static_cast<int>( x.size() ) != n )
      {
        bad_field( where, "bitstring length differs from n" );
      }
      if ( !mass.emplace( index_of( x ), rational_of( pair[1], where ) ).second )
      {
        bad_field( where, "duplicate point" );
      }
    }
    return located( "mass", [&] { return measure::explicit_masses( n, std::move( mass ) ); } );
  }
  if ( kind == "tmixture" )
  {
    const int n = int_of( doc, "n", "" );
    const auto eps = rational_of( member( doc, "eps", "" ), "eps" );
    return located( "eps", [&] { return measure::tmixture( n, eps ); } );
  }
  if ( kind == "all_same" )
  {
    const int n = int_of( doc, "n", "" );
    const auto p = rational_of( member( doc, "p", "" ), "p" );
    return located( "p", [&] { return measure::all_same( n, p ); } );
  }
  if ( kind == "ising_leaves" )
  {
    const int depth = int_of( doc, "depth", "" );
    const auto eps = rational_of( member( doc, "eps", "" ), "eps" );
    const auto delta = rational_of( member( doc, "delta", "" ), "delta" );
    return located( "ising_leaves", [&] { return measure::ising_leaves( depth, eps, delta ); } );
  }
  bad_field( "kind", "unknown measure kind '" + kind + "'" );
}

measure load_measure( const std::filesystem::path& path )
{
  const auto doc = parse( read_file( path ), path.string() );
  try
  {
    return measure_from_json( doc );
  }
  catch ( const error& e )
  {
    throw error( e.code(), path.string() + ": " + e.message() );
  }
}

void save_measure( const std::filesystem::path& path, const measure& mu )
{
  write_file( path, to_json( mu ).dump( 2 ) + "\n" );
}

json to_json( const classify_result& result )
{
  json out;
  out["verdict"] = result.is_weighted_majority() ? "WeightedMajority" : "NotWeightedMajority";
  out["tau_star"] = result.tau.infinite() ? json( "infinity" ) : exact_value( *result.tau.value );
  if ( const auto* cert = std::get_if<weight_certificate>( &result.verdict ) )
  {
    out["weights"] = rational_list( cert->weights );
    out["ties"] = ties_to_json( cert->ties );
    out["perturbation_halvings"] = cert->halvings;
  }
  else
  {
    const auto& w = std::get<adversarial_witness>( result.verdict );
    out["witness"] = to_json( w.mu );
    json nulls = json::array();
    for ( int k : w.null_conditioning )
    {
      nulls.push_back( k + 1 );
    }
    out["null_conditioning"] = nulls;
  }
  return out;
}

json to_json( const power_report& report )
{
  json rows = json::array();
  for ( std::size_t i = 0; i < report.rows.size(); ++i )
  {
    const auto& row = report.rows[i];
    json r{ { "k", row.k + 1 }, { "p_k", exact_value( row.marginal ) }, { "influence", exact_value( row.influence ) } };
    r["effect"] = row.effect ? exact_value( *row.effect ) : json( nullptr );
    if ( report.banzhaf )
    {
      r["banzhaf"] = exact_value( ( *report.banzhaf )[i] );
    }
    if ( report.shapley_shubik )
    {
      r["shapley_shubik"] = exact_value( ( *report.shapley_shubik )[i] );
    }
    rows.push_back( std::move( r ) );
  }
  return { { "function", report.function_name }, { "measure", report.measure_name }, { "rows", rows } };
}

std::string table::to_tsv() const
{
  std::ostringstream out;
  for ( std::size_t c = 0; c < columns.size(); ++c )
  {
    out << ( c ? "\t" : "" ) << columns[c];
  }
  out << '\n';
  for ( const auto& row : rows )
  {
    for ( std::size_t c = 0; c < row.size(); ++c )
    {
      out << ( c ? "\t" : "" ) << row[c];
    }
    out << '\n';
  }
  return out.str();
}

json table::to_json() const
{
  json out = json::array();
  for ( const auto& row : rows )
  {
    json obj = json::object();
    for ( std::size_t c = 0; c < columns.size() && c < row.size(); ++c )
    {
      obj[columns[c]] = row[c];
    }
    out.push_back( std::move( obj ) );
  }
  return out;
}

table power_table( const power_report& report )
{
  table t;
  t.columns = { "k" };
  const auto add_column = [&]( const std::string& name ) {
    t.columns.push_back( name );
    t.columns.push_back( name + "_exact" );
  };
  add_column( "p_k" );
  add_column( "influence" );
  add_column( "effect" );
  add_column( "banzhaf" );
  add_column( "shapley_shubik" );
  const auto cells = [&]( std::vector<std::string>& row, const std::optional<rational>& v ) {
    row.push_back( v ? to_decimal( *v ) : "NA" );
    row.push_back( v ? to_string( *v ) : "NA" );
  };
  for ( std::size_t i = 0; i < report.rows.size(); ++i )
  {
    const auto& r = report.rows[i];
    std::vector<std::string> row{ std::to_string( r.k + 1 ) };
    cells( row, r.marginal );
    cells( row, r.influence );
    cells( row, r.effect );
    cells( row, report.banzhaf ? std::optional<rational>( ( *report.banzhaf )[i] ) : std::nullopt );
    cells( row, report.shapley_shubik ? std::optional<rational>( ( *report.shapley_shubik )[i] ) : std::nullopt );
    t.rows.push_back( std::move( row ) );
  }
  return t;
}

std::string read_file( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw error( errc::invalid_input, "cannot open file '" + path.string() + "'" );
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file( const std::filesystem::path& path, const std::string& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out || !( out << text ) )
  {
    throw error( errc::invalid_input, "cannot write file '" + path.string() + "'" );
  }
}

json parse( const std::string& text, const std::string& origin )
{
  try
  {
    return json::parse( text );
  }
  catch ( const json::parse_error& e )
  {
    throw error( errc::parse_error, origin + ": " + e.what() );
  }
}

} // namespace wmaj::io
