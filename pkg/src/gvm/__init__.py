"""Generalised voter model on weighted directed graphs.

Simulation, objective evaluators and greedy seed-set maximisation for the
blue-adoption objective, exact Markov-chain convergence analysis at small
scale, and the graph families used to probe the dynamics.
"""

from .dynamics import (
    BLUE,
    RED,
    UNCOLOURED,
    Colour,
    ColouringDistribution,
    McEstimate,
    RngStream,
    StateSpace,
    System,
    all_uncoloured,
    belief_from_colouring,
    colour_counts,
    colouring_from_letters,
    exact_distribution,
    expected_blue,
    letters_of,
    make_evaluator,
    make_system,
    propagate_marginals,
    seed_apply,
    simulate_mc,
    step_sample,
)
from .generators import (
    HrgParams,
    HrgSample,
    MaxCoverageInstance,
    ReductionSystem,
    gen_exp_period,
    gen_exp_time,
    gen_hrg,
    gen_reduction,
    hrg_colouring,
    hyperbolic_distances,
    sample_hrg_coords,
)
from .graph import (
    DerivedClassGraph,
    DistanceReport,
    GraphValidationError,
    NormalizedDigraph,
    PeriodStructure,
    SccResult,
    WeightedDigraph,
    bfs_distances,
    derived_class_graph,
    distances_and_diameter,
    graph_period,
    is_strongly_connected,
    period_classes,
    strongly_connected_components,
)
from .io import (
    ConvergenceRow,
    ExperimentResult,
    ResultsRow,
    load_colouring,
    load_coverage_spec,
    load_graph,
    parse_config,
    read_results_csv,
    run_convergence_experiment,
    run_experiment,
    save_colouring,
    save_graph,
    save_node_table,
    write_convergence_csv,
    write_results_csv,
)
from .markov import (
    ConvergenceEstimate,
    LeafComponent,
    LeafReport,
    absorbing_analysis,
    detect_converged,
    estimate_convergence_time,
    expected_absorption_time,
    monochromatic_coloured,
    state_successors,
)
from .maximize import (
    CENTRALITIES,
    METHODS,
    StrategyResult,
    betweenness_scores,
    centrality_rank,
    evaluate_strategy,
    greedy_seed,
    harmonic_closeness_scores,
    in_degree_scores,
    out_degree_scores,
    pagerank_scores,
)

__version__ = "0.1.0"
