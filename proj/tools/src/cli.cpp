#include "wmaj/cli.hpp"

#include "CLI11.hpp"

#include <wmaj/bounds.hpp>
#include <wmaj/classify.hpp>
#include <wmaj/error.hpp>
#include <wmaj/io.hpp>
#include <wmaj/ising.hpp>
#include <wmaj/measure.hpp>
#include <wmaj/power.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

namespace wmaj::cli
{

namespace
{

namespace fs = std::filesystem;

[[noreturn]] void invalid( const std::string& field, const std::string& what )
{
  throw error( errc::invalid_input, "--" + field + ": " + what );
}

std::string real( double v )
{
  char buf[32];
  std::snprintf( buf, sizeof buf, "%.12g", v );
  return buf;
}

std::vector<rational> rationals( const std::vector<std::string>& items, const std::string& field )
{
  std::vector<rational> out;
  for ( const auto& s : items )
  {
    try
    {
      out.push_back( parse_rational( s ) );
    }
    catch ( const error& e )
    {
      invalid( field, e.message() );
    }
  }
  if ( out.empty() )
  {
    invalid( field, "at least one value required" );
  }
  return out;
}

/* Accepts "3", "1-6" and comma lists of either. */
std::vector<int> integers( const std::vector<std::string>& items, const std::string& field )
{
  std::vector<int> out;
  for ( const auto& s : items )
  {
    try
    {
      std::size_t used = 0;
      const auto dash = s.find( '-', 1 );
      if ( dash == std::string::npos )
      {
        out.push_back( std::stoi( s, &used ) );
        if ( used != s.size() )
        {
          throw std::invalid_argument( s );
        }
        continue;
      }
      const int lo = std::stoi( s.substr( 0, dash ) );
      const int hi = std::stoi( s.substr( dash + 1 ), &used );
      if ( used != s.size() - dash - 1 || hi < lo )
      {
        throw std::invalid_argument( s );
      }
      for ( int v = lo; v <= hi; ++v )
      {
        out.push_back( v );
      }
    }
    catch ( const std::logic_error& )
    {
      invalid( field, "expected an integer or a range a-b, got '" + s + "'" );
    }
  }
  if ( out.empty() )
  {
    invalid( field, "at least one value required" );
  }
  return out;
}

void require_file( const std::string& path, const std::string& field )
{
  if ( path.empty() )
  {
    invalid( field, "a file path is required" );
  }
  if ( !fs::is_regular_file( path ) )
  {
    invalid( field, "no such file '" + path + "'" );
  }
}

struct output_options
{
  std::string format = "table";
  std::string output;
};

void add_output( CLI::App* cmd, output_options& o, const std::string& default_format )
{
  o.format = default_format;
  cmd->add_option( "--format", o.format, "table (tab-separated) or json" )
      ->check( CLI::IsMember( { "table", "json" } ) )
      ->capture_default_str();
  cmd->add_option( "--output", o.output, "write the report here instead of standard output" );
}

void emit( const output_options& o, const std::string& text, std::ostream& out )
{
  if ( o.output.empty() )
  {
    out << text;
  }
  else
  {
    io::write_file( o.output, text );
  }
}

void emit_table( const output_options& o, const io::table& t, std::ostream& out )
{
  emit( o, o.format == "json" ? t.to_json().dump( 2 ) + "\n" : t.to_tsv(), out );
}

/* ---- power ---- */

struct power_config
{
  std::string function;
  std::string measure;
  bool banzhaf = false;
  bool shapley_shubik = false;
  int cap = default_enumeration_cap;
  output_options out;
};

void run_power( const power_config& c, std::ostream& out )
{
  require_file( c.function, "function" );
  require_file( c.measure, "measure" );
  const auto f = io::load_function( c.function );
  const auto mu = io::load_measure( c.measure );
  const auto report = make_power_report( f, mu, { c.banzhaf, c.shapley_shubik, c.cap } );
  if ( c.out.format == "json" )
  {
    emit( c.out, io::to_json( report ).dump( 2 ) + "\n", out );
  }
  else
  {
    emit_table( c.out, io::power_table( report ), out );
  }
}

/* ---- classify ---- */

struct classify_config
{
  std::string function;
  std::string witness;
  int cap = classify_cap;
  output_options out;
};

void run_classify( const classify_config& c, std::ostream& out )
{
  require_file( c.function, "function" );
  const auto f = io::load_function( c.function );
  const auto result = classify( f, c.cap );
  if ( !c.witness.empty() )
  {
    if ( const auto* cert = std::get_if<weight_certificate>( &result.verdict ) )
    {
      io::save_function( c.witness, bool_fn::weighted_majority( cert->weights, cert->ties ) );
    }
    else
    {
      const auto& w = std::get<adversarial_witness>( result.verdict );
      io::write_file( c.witness, io::to_json( w.mu ).dump( 2 ) + "\n" );
    }
  }
  if ( c.out.format == "json" )
  {
    emit( c.out, io::to_json( result ).dump( 2 ) + "\n", out );
    return;
  }
  io::table t;
  t.columns = { "verdict", "tau_star", "tau_star_exact" };
  std::vector<std::string> row{ result.is_weighted_majority() ? "WeightedMajority" : "NotWeightedMajority" };
  if ( result.tau.infinite() )
  {
    row.insert( row.end(), { "inf", "inf" } );
  }
  else
  {
    row.insert( row.end(), { to_decimal( *result.tau.value ), to_string( *result.tau.value ) } );
  }
  t.rows.push_back( std::move( row ) );
  emit_table( c.out, t, out );
}

/* ---- bounds ---- */

struct bounds_config
{
  std::vector<std::string> p;
  std::vector<std::string> q{ "1/2" };
  std::vector<std::string> delta;
  std::vector<std::string> n;
  std::string function;
  std::string measure;
  output_options out;
};

void run_bounds( const bounds_config& c, std::ostream& out )
{
  io::table t;
  t.columns = { "p", "q", "delta", "n", "r", "lp_min", "lp_min_exact", "bound_lin", "bound_lin_exact",
                "bound_prob", "bound_prob_exact", "mu_f", "mu_f_exact" };
  const auto put = [&]( std::vector<std::string>& row, const std::optional<rational>& v ) {
    row.push_back( v ? to_decimal( *v ) : "NA" );
    row.push_back( v ? to_string( *v ) : "NA" );
  };

  if ( !c.function.empty() || !c.measure.empty() )
  {
    require_file( c.function, "function" );
    require_file( c.measure, "measure" );
    const auto q = rationals( c.q, "q" );
    if ( q.size() != 1 )
    {
      invalid( "q", "instance mode takes a single q" );
    }
    const auto f = io::load_function( c.function );
    const auto mu = io::load_measure( c.measure );
    const auto rep = check_lemma1_on_instance( f, mu, q[0] );
    std::vector<std::string> row{ to_string( rep.p ), to_string( rep.q ), to_string( rep.delta ), "NA", "NA" };
    put( row, std::nullopt );
    put( row, rep.bound_lin );
    put( row, rep.bound_prob );
    put( row, rep.mu_f );
    t.rows.push_back( std::move( row ) );
    emit_table( c.out, t, out );
    return;
  }

  const auto ps = rationals( c.p, "p" );
  const auto qs = rationals( c.q, "q" );
  const auto ds = rationals( c.delta, "delta" );
  const auto ns = c.n.empty() ? std::vector<int>{} : integers( c.n, "n" );
  for ( const auto& p : ps )
  {
    for ( const auto& q : qs )
    {
      for ( const auto& d : ds )
      {
        const bound_input in{ p, q, d };
        const auto lin = bound_lin( in );
        const auto prob = bound_prob( in );
        if ( ns.empty() )
        {
          std::vector<std::string> row{ to_string( p ), to_string( q ), to_string( d ), "NA", "NA" };
          put( row, std::nullopt );
          put( row, lin );
          put( row, prob );
          put( row, std::nullopt );
          t.rows.push_back( std::move( row ) );
          continue;
        }
        for ( int n : ns )
        {
          const rational qn = q * n;
          const int r = static_cast<int>( mpz_class( qn.get_num() / qn.get_den() ).get_si() );
          const auto rep = verify_tightness( p, q, d, n, r );
          std::vector<std::string> row{ to_string( p ), to_string( q ), to_string( d ), std::to_string( n ),
                                        std::to_string( r ) };
          put( row, rep.lp_min );
          put( row, lin );
          put( row, prob );
          put( row, std::nullopt );
          t.rows.push_back( std::move( row ) );
        }
      }
    }
  }
  emit_table( c.out, t, out );
}

/* ---- ising ---- */

struct ising_config
{
  std::vector<std::string> depth{ "1-6" };
  std::vector<std::string> eps{ "1/100" };
  std::vector<std::string> delta{ "1/100" };
  std::string mode = "exact";
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::size_t batches = 16;
  unsigned threads = 0;
  std::optional<int> effect_leaf;
  output_options out;
};

void run_ising( const ising_config& c, std::ostream& out )
{
  const auto depths = integers( c.depth, "depth" );
  const auto epss = rationals( c.eps, "eps" );
  const auto deltas = rationals( c.delta, "delta" );
  const bool exact = c.mode != "mc";
  const bool mc = c.mode != "exact" || c.effect_leaf.has_value();
  if ( mc && !c.seed )
  {
    invalid( "seed", "required for Monte Carlo runs" );
  }
  if ( c.samples == 0 )
  {
    invalid( "samples", "must be positive" );
  }
  const ising::mc_options opts{ c.batches, c.threads };

  io::table t;
  t.columns = { "r", "eps", "delta", "mu_m", "mu_m_exact_dp", "error_bound", "ceiling", "mc_estimate", "mc_stderr",
                "claim2_stated", "claim2_proof_form" };
  if ( c.effect_leaf )
  {
    t.columns.insert( t.columns.end(), { "leaf", "effect_vote", "effect_vote_stderr", "effect_spin", "effect_spin_stderr" } );
  }

  // validate every cell before doing any work
  for ( int r : depths )
  {
    for ( const auto& e : epss )
    {
      for ( const auto& d : deltas )
      {
        const ising::tree_params tp{ r, e, d };
        tp.validate();
        if ( c.effect_leaf && ( *c.effect_leaf < 1 || *c.effect_leaf > tp.leaves() ) )
        {
          invalid( "effect-leaf", "leaf index out of range for depth " + std::to_string( r ) );
        }
      }
    }
  }

  std::uint64_t cell = 0;
  for ( int r : depths )
  {
    for ( const auto& e : epss )
    {
      for ( const auto& d : deltas )
      {
        const ising::tree_params tp{ r, e, d };
        std::vector<std::string> row{ std::to_string( r ), to_string( e ), to_string( d ) };
        if ( exact )
        {
          const auto bp = ising::bp_exact( tp );
          row.insert( row.end(), { to_decimal( bp.mu_m ), bp.exact ? "yes" : "no", real( bp.error_bound ) } );
        }
        else
        {
          row.insert( row.end(), { "NA", "NA", "NA" } );
        }
        row.push_back( to_decimal( rational( 1, 2 ) + d / 2 ) );
        const auto cell_seed = c.seed ? stream_seed( *c.seed, cell ) : 0;
        if ( c.mode != "exact" )
        {
          const auto est = ising::mc_mu_m( tp, c.samples, cell_seed, opts );
          row.insert( row.end(), { real( est.estimate ), real( est.std_error ) } );
        }
        else
        {
          row.insert( row.end(), { "NA", "NA" } );
        }
        const auto c2 = ising::claim2_bound( r, to_double( e ) );
        row.insert( row.end(), { real( c2.stated ), real( c2.proof_form ) } );
        if ( c.effect_leaf )
        {
          const auto eff = ising::mc_effect( tp, *c.effect_leaf - 1, c.samples, stream_seed( cell_seed, 1 ), opts );
          row.insert( row.end(), { std::to_string( *c.effect_leaf ), real( eff.vote_conditioned.estimate ),
                                   real( eff.vote_conditioned.std_error ), real( eff.spin_conditioned.estimate ),
                                   real( eff.spin_conditioned.std_error ) } );
        }
        t.rows.push_back( std::move( row ) );
        ++cell;
      }
    }
  }
  emit_table( c.out, t, out );
}

/* ---- simulate ---- */

struct simulate_config
{
  std::string model = "tmixture";
  std::vector<std::string> n{ "3", "5", "7" };
  std::vector<std::string> param;
  std::uint64_t samples = 0;
  std::optional<std::uint64_t> seed;
  output_options out;
};

void run_simulate( const simulate_config& c, std::ostream& out )
{
  const auto ns = integers( c.n, "n" );
  const auto params = rationals( c.param, "param" );
  if ( c.samples > 0 && !c.seed )
  {
    invalid( "seed", "required when samples > 0" );
  }
  for ( int n : ns )
  {
    if ( n < 1 || n % 2 == 0 || n > 63 )
    {
      invalid( "n", "voter counts must be odd and at most 63, got " + std::to_string( n ) );
    }
  }
  std::vector<measure> cells;
  for ( int n : ns )
  {
    for ( const auto& v : params )
    {
      cells.push_back( c.model == "tmixture" ? measure::tmixture( n, v ) : measure::all_same( n, v ) );
    }
  }

  io::table t;
  t.columns = { "model", "n", "param", "win_prob", "win_prob_exact", "ceiling", "ceiling_exact", "below_ceiling",
                "mc_estimate", "mc_stderr" };
  std::uint64_t cell = 0;
  for ( int n : ns )
  {
    for ( const auto& v : params )
    {
      const auto& mu = cells[cell];
      std::vector<std::string> row{ c.model, std::to_string( n ), to_string( v ) };
      rational win;
      std::optional<rational> ceiling;
      if ( c.model == "tmixture" )
      {
        win = tmixture_win_prob( n, v );
        ceiling = 1 / ( 2 * ( 1 - v ) );
      }
      else
      {
        win = expect( mu, bool_fn::majority( n ) );
      }
      row.insert( row.end(), { to_decimal( win ), to_string( win ) } );
      if ( ceiling )
      {
        row.insert( row.end(), { to_decimal( *ceiling ), to_string( *ceiling ), win < *ceiling ? "yes" : "no" } );
      }
      else
      {
        row.insert( row.end(), { "NA", "NA", "NA" } );
      }
      if ( c.samples > 0 )
      {
        const auto draws = sample( mu, stream_seed( *c.seed, cell ), c.samples );
        std::uint64_t wins = 0;
        for ( const auto& x : draws )
        {
          int ones = 0;
          for ( auto b : x )
          {
            ones += b;
          }
          wins += 2 * ones > n;
        }
        const double m = static_cast<double>( wins ) / static_cast<double>( c.samples );
        row.insert( row.end(), { real( m ), real( std::sqrt( m * ( 1 - m ) / static_cast<double>( c.samples ) ) ) } );
      }
      else
      {
        row.insert( row.end(), { "NA", "NA" } );
      }
      t.rows.push_back( std::move( row ) );
      ++cell;
    }
  }
  emit_table( c.out, t, out );
}

int code_for( const error& e )
{
  return e.code() == errc::verification_failed ? exit_verification : exit_validation;
}

} // namespace

int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Voting power, weighted-majority classification and aggregation bounds", "wmaj" };
  app.set_config( "--config", "", "TOML file with one [command] section; flags override its keys" );
  app.require_subcommand( 1 );

  power_config pc;
  auto* power = app.add_subcommand( "power", "influences, effects and power indices of f under mu" )->configurable();
  power->add_option( "--function", pc.function, "function description file" );
  power->add_option( "--measure", pc.measure, "measure description file" );
  power->add_flag( "--banzhaf", pc.banzhaf, "add the Banzhaf column" );
  power->add_flag( "--shapley-shubik", pc.shapley_shubik, "add the Shapley-Shubik column" );
  power->add_option( "--cap", pc.cap, "enumeration limit on the number of variables" )->capture_default_str();
  add_output( power, pc.out, "table" );

  classify_config cc;
  auto* cls = app.add_subcommand( "classify", "weighted majority or an adversarial measure" )->configurable();
  cls->add_option( "--function", cc.function, "function description file" );
  cls->add_option( "--witness", cc.witness, "write the weights (function file) or the measure (measure file) here" );
  cls->add_option( "--cap", cc.cap, "enumeration limit on the number of variables" )->capture_default_str();
  add_output( cls, cc.out, "json" );

  bounds_config bc;
  auto* bnd = app.add_subcommand( "bounds", "aggregation lower bounds and the tightness program" )->configurable();
  bnd->add_option( "--p", bc.p, "mean marginal(s)" )->delimiter( ',' );
  bnd->add_option( "--q", bc.q, "threshold fraction(s)" )->delimiter( ',' )->capture_default_str();
  bnd->add_option( "--delta", bc.delta, "effect budget(s)" )->delimiter( ',' );
  bnd->add_option( "--n", bc.n, "voter counts for the tightness program; r = floor(q n)" )->delimiter( ',' );
  bnd->add_option( "--function", bc.function, "weighted majority function file (instance mode)" );
  bnd->add_option( "--measure", bc.measure, "measure file (instance mode)" );
  add_output( bnd, bc.out, "table" );

  ising_config ic;
  auto* ising = app.add_subcommand( "ising", "recursive majority on the broadcast tree" )->configurable();
  ising->add_option( "--depth", ic.depth, "depth(s) r, e.g. 1-12 or 5,7,9" )->delimiter( ',' )->capture_default_str();
  ising->add_option( "--eps", ic.eps, "flip probabilit(ies)" )->delimiter( ',' )->capture_default_str();
  ising->add_option( "--delta", ic.delta, "resampling probabilit(ies)" )->delimiter( ',' )->capture_default_str();
  ising->add_option( "--mode", ic.mode, "exact, mc or both" )
      ->check( CLI::IsMember( { "exact", "mc", "both" } ) )
      ->capture_default_str();
  ising->add_option( "--samples", ic.samples, "Monte Carlo samples per cell" )->capture_default_str();
  ising->add_option( "--seed", ic.seed, "seed (required for Monte Carlo)" );
  ising->add_option( "--batches", ic.batches, "Monte Carlo batch count" )->capture_default_str();
  ising->add_option( "--threads", ic.threads, "worker threads, 0 for all cores" )->capture_default_str();
  ising->add_option( "--effect-leaf", ic.effect_leaf, "leaf (1-based) whose effect is estimated" );
  add_output( ising, ic.out, "table" );

  simulate_config sc;
  auto* sim = app.add_subcommand( "simulate", "majority win probability under t-mixture or all-same votes" )->configurable();
  sim->add_option( "--model", sc.model, "tmixture or all_same" )
      ->check( CLI::IsMember( { "tmixture", "all_same" } ) )
      ->capture_default_str();
  sim->add_option( "--n", sc.n, "odd voter count(s)" )->delimiter( ',' )->capture_default_str();
  sim->add_option( "--param", sc.param, "eps for tmixture, p for all_same" )->delimiter( ',' );
  sim->add_option( "--samples", sc.samples, "Monte Carlo samples per cell (0: exact only)" )->capture_default_str();
  sim->add_option( "--seed", sc.seed, "seed (required when samples > 0)" );
  add_output( sim, sc.out, "table" );

  std::vector<std::string> reversed( args.rbegin(), args.rend() );
  try
  {
    app.parse( reversed );
  }
  catch ( const CLI::ParseError& e )
  {
    const int code = app.exit( e, out, err );
    return code == 0 ? exit_ok : exit_validation;
  }

  try
  {
    if ( power->parsed() )
    {
      run_power( pc, out );
    }
    else if ( cls->parsed() )
    {
      run_classify( cc, out );
    }
    else if ( bnd->parsed() )
    {
      run_bounds( bc, out );
    }
    else if ( ising->parsed() )
    {
      run_ising( ic, out );
    }
    else
    {
      run_simulate( sc, out );
    }
  }
  catch ( const error& e )
  {
    err << "wmaj: " << e.what() << "\n";
    return code_for( e );
  }
  catch ( const std::exception& e )
  {
    err << "wmaj: internal error: " << e.what() << "\n";
    return exit_internal;
  }
  return exit_ok;
}

} // namespace wmaj::cli
