// Sample forests once, then keep estimating entries while the graph changes.

#include "forestmat/forestmat.hpp"

#include <iostream>

int main()
{
	using namespace forestmat;

	Digraph g = random_sparse_digraph(5000, 2, 8, 42);
	const EstimatorParams params{0.05, 0.01};
	const std::uint64_t l0 = required_samples(params, 0, true);
	ForestList list = sample_forest_list(g, l0, 42);

	const NodeId i = 10, j = g.out_neighbors(10)[0];
	std::cout << "l0=" << l0 << '\n';
	std::cout << "before: omega_ii ~ " << sfqplus_query(g, list, i, i).value << ", omega_ij ~ "
			  << sfqplus_query(g, list, i, j).value << '\n';

	const PruneConfig prune_cfg{l0, 5.0};
	CounterRng prune_rng(42, 1);
	const auto events = random_churn(g, 20, 20, 42);
	apply_stream(g, list, events, prune_cfg, prune_rng);

	std::cout << "after " << events.size() << " updates: omega_ii ~ " << sfqplus_query(g, list, i, i).value
			  << " (exact " << ForestColumnSolver(g).diagonal(i) << "), list weight " << list.total_weight() << '\n';
	return 0;
}
