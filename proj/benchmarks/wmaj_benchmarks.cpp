#include <wmaj/classify.hpp>
#include <wmaj/ising.hpp>
#include <wmaj/lp.hpp>
#include <wmaj/power.hpp>

#include <benchmark/benchmark.h>

using namespace wmaj;

static void tau_star_recursive_majority( benchmark::State& state )
{
  const auto h = zero_hypergraph_of( bool_fn::recursive_majority( 3, 2 ) );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( tau_star( h ) );
  }
}
BENCHMARK( tau_star_recursive_majority )->Unit( benchmark::kMillisecond );

static void classify_majority( benchmark::State& state )
{
  const auto f = bool_fn::majority( static_cast<int>( state.range( 0 ) ) );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( classify( f ) );
  }
}
BENCHMARK( classify_majority )->Arg( 5 )->Arg( 7 )->Arg( 9 )->Unit( benchmark::kMillisecond );

static void bp_exact_depth( benchmark::State& state )
{
  ising::tree_params tp{ static_cast<int>( state.range( 0 ) ), ratio( 1, 100 ), ratio( 1, 100 ) };
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( ising::bp_exact( tp ) );
  }
}
BENCHMARK( bp_exact_depth )->DenseRange( 4, 10, 2 )->Unit( benchmark::kMillisecond );

static void mc_mu_m_samples( benchmark::State& state )
{
  ising::tree_params tp{ static_cast<int>( state.range( 0 ) ), ratio( 1, 100 ), ratio( 1, 100 ) };
  ising::mc_options opts;
  opts.threads = 1;
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( ising::mc_mu_m( tp, 10000, 1, opts ) );
  }
  state.SetItemsProcessed( state.iterations() * 10000 );
}
BENCHMARK( mc_mu_m_samples )->Arg( 4 )->Arg( 6 )->Arg( 8 )->Unit( benchmark::kMillisecond );

static void shapley_shubik_weighted( benchmark::State& state )
{
  const int n = static_cast<int>( state.range( 0 ) );
  std::vector<rational> w;
  for ( int i = 0; i < n; ++i )
  {
    w.emplace_back( 2 * i + 1 );
  }
  if ( n % 2 == 0 )
  {
    w.back() += 1;
  }
  const auto f = to_truth_table( bool_fn::weighted_majority( w ) );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( shapley_shubik( f ) );
  }
}
BENCHMARK( shapley_shubik_weighted )->Arg( 9 )->Arg( 13 )->Unit( benchmark::kMillisecond );

BENCHMARK_MAIN();
