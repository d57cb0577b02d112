from django.conf import settings

from hyperwander.engine.tableau import Limits
from hyperwander.selection.params import SelectionMode, SelectionParams
from hyperwander.wander.params import ClusterPick, ClusterSimilarity, WanderParams


def defaults():
    return settings.HYPERWANDER


def add_limit_arguments(parser):
    d = defaults()
    parser.add_argument("--timeout", type=float, default=d["TIMEOUT_SECONDS"], help="seconds per saturation run")
    parser.add_argument("--max-depth", type=int, default=d["MAX_TERM_DEPTH"], dest="max_depth")
    parser.add_argument("--max-atoms", type=int, default=d["MAX_BRANCH_ATOMS"], dest="max_atoms")
    parser.add_argument(
        "--max-steps",
        type=int,
        default=d["MAX_STEPS"],
        dest="max_steps",
        help="extension budget per saturation run (deterministic, unlike --timeout)",
    )


def add_selection_arguments(parser):
    d = defaults()
    parser.add_argument("--lo", type=float, default=d["SIM_LOW"], help="lower bound of the similarity interval")
    parser.add_argument("--hi", type=float, default=d["SIM_HIGH"], help="upper bound of the similarity interval")
    parser.add_argument("--expand", type=float, default=d["EXPAND_THRESHOLD"], help="context expansion threshold")
    parser.add_argument("--tolerance", type=float, default=d["SINE_TOLERANCE"])
    parser.add_argument("--depth", type=int, default=d["SINE_DEPTH"])
    parser.add_argument("--max", type=int, default=d["MAX_AXIOMS"], dest="max_axioms")
    parser.add_argument("--oov-pass", action="store_true", dest="oov_pass", default=False)
    parser.add_argument("--exempt-relations", action="store_true", dest="exempt_relations", default=False)


def add_wander_arguments(parser):
    d = defaults()
    add_selection_arguments(parser)
    add_limit_arguments(parser)
    parser.add_argument("--rounds", type=int, default=d["ROUNDS"])
    parser.add_argument("--seed", type=int, default=d["SEED"])
    parser.add_argument("--pick", choices=ClusterPick.values, default=ClusterPick.MIDDLE)
    parser.add_argument("--pick-index", type=int, default=0, dest="pick_index")
    parser.add_argument("--divisor", type=int, default=d["CLUSTER_DIVISOR"])
    parser.add_argument("--similarity", choices=ClusterSimilarity.values, default=ClusterSimilarity.MEAN)
    parser.add_argument("--mode", choices=SelectionMode.values, default=SelectionMode.SEMANTIC)
    parser.add_argument(
        "--no-visited",
        action="store_false",
        dest="accumulate_visited",
        default=True,
        help="only subtract the current context from derived symbols",
    )


def limits_from(options) -> Limits:
    return Limits(
        timeout_seconds=options["timeout"],
        max_term_depth=options["max_depth"],
        max_branch_atoms=options["max_atoms"],
        max_steps=options["max_steps"],
    )


def selection_from(options) -> SelectionParams:
    return SelectionParams(
        sim_low=options["lo"],
        sim_high=options["hi"],
        expand_threshold=options["expand"],
        sine_tolerance=options["tolerance"],
        sine_depth=options["depth"],
        max_axioms=options["max_axioms"],
        oov_pass=options["oov_pass"],
        exempt_relations=options["exempt_relations"],
    )


def wander_from(options) -> WanderParams:
    return WanderParams(
        selection=selection_from(options),
        selection_mode=options["mode"],
        limits=limits_from(options),
        max_rounds=options["rounds"],
        cluster_divisor=options["divisor"],
        cluster_pick=options["pick"],
        pick_index=options["pick_index"],
        cluster_similarity=options["similarity"],
        seed=options["seed"],
        accumulate_visited=options["accumulate_visited"],
    )
