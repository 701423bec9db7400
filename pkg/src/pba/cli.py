"""Command-line front end.

Every subcommand is a thin adapter over the library: numeric inputs are
parsed as exact rationals, outputs are byte-for-byte reproducible for
fixed inputs and flags.  ``--porcelain`` switches to machine-readable
output, one fact per line as ``key<TAB>value`` with rationals printed
as ``num/den``.

Exit codes: 0 the query was answered (affirmatively, for decisions);
1 a decision was answered negatively; 2 usage or input error; 3 a
budget or precision cap was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import ambiguity as amb
from . import witness as wit
from .automaton import (
    ProbabilisticAutomaton,
    acceptance_probability,
    parse_automaton,
    serialize_automaton,
)
from .errors import (
    BudgetExceededError,
    PbaError,
    PrecisionError,
)
from .generators import (
    Homomorphism,
    bin_automaton,
    clique_automaton,
    dfa_intersection_automaton,
    isolation_instance,
    parse_graph,
    random_k_ambiguous,
)
from .plot import render_curve_svg, write_curve_csv
from .ratio import decimal_echo, format_ratio, parse_ratio
from .stochpath import (
    approximate_value,
    convex_pareto_2,
    decide_stochastic_path,
    emptiness_2ambiguous,
    epsilon_convex_pareto,
    exact_pareto,
    parse_dag,
    path_word,
    reduce_to_dag,
    serialize_dag,
)

SAT = 0
UNSAT = 1
USAGE = 2
BUDGET = 3


class Reporter:
    def __init__(self, porcelain: bool):
        self.porcelain = porcelain

    def fact(self, key: str, value, human: str | None = None) -> None:
        if self.porcelain:
            print(f"{key}\t{value}")
        else:
            print(human if human is not None else f"{key}: {value}")

    def ratio(self, key: str, value: Fraction) -> None:
        text = format_ratio(value)
        self.fact(key, text, f"{key}: {text} (~{decimal_echo(value)})")


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_automaton(path: str) -> ProbabilisticAutomaton:
    return parse_automaton(_read(path))


def parse_word(text: str, alphabet: tuple[str, ...]) -> tuple[str, ...]:
    """Words are plain strings when every letter is one character;
    multi-character letters are comma-separated."""
    if text == "":
        return ()
    if "," in text:
        return tuple(text.split(","))
    if all(len(a) == 1 for a in alphabet):
        return tuple(text)
    return (text,)


def format_word(word: tuple[str, ...], alphabet: tuple[str, ...]) -> str:
    if all(len(a) == 1 for a in alphabet):
        return "".join(word)
    return ",".join(word)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    pa = _load_automaton(args.file)
    report = Reporter(args.porcelain)
    verdict = amb.classify(pa, max_k=args.max_k, budget=args.budget)
    report.fact("class", verdict.kind, f"class: {verdict.kind}")
    if verdict.k is not None:
        report.fact("k", verdict.k)
    elif verdict.cap is not None:
        report.fact("k-cap", verdict.cap, f"k not found up to cap {verdict.cap}")
    if args.profile is not None:
        profile = amb.ambiguity_profile(pa, args.profile, budget=args.budget)
        for length, count in profile:
            report.fact("profile", f"{length},{count}",
                        f"profile: length {length} -> max runs {count}")
    return SAT


def _emptiness_auto(pa, threshold, args, report):
    if amb.is_k_ambiguous(pa, 2, budget=args.budget):
        report.fact("method", "convex2")
        sat, word = emptiness_2ambiguous(pa, threshold, check=False)
        return sat, word
    verdict = amb.classify(pa, budget=args.budget)
    if verdict.kind in (amb.UNAMBIGUOUS, amb.FINITELY_AMBIGUOUS) and (
        verdict.k is not None and verdict.k <= 3
    ):
        report.fact("method", "exact-pareto")
        dag = reduce_to_dag(pa, verdict.k, check=False, budget=args.budget)
        sat, best = decide_stochastic_path(dag, threshold, budget=args.budget)
        return sat, (path_word(dag, best) if sat else None)
    report.fact("method", "exhaustive")
    max_len = args.max_len if args.max_len is not None else wit.witness_bound(pa)
    found = wit.exhaustive_emptiness(pa, threshold, max_len, budget=args.budget)
    return (found.word is not None), found.word


def cmd_emptiness(args) -> int:
    pa = _load_automaton(args.file)
    threshold = parse_ratio(args.threshold)
    report = Reporter(args.porcelain)
    report.ratio("threshold", threshold)
    if args.method == "exhaustive":
        report.fact("method", "exhaustive")
        max_len = args.max_len if args.max_len is not None else wit.witness_bound(pa)
        report.fact("max-len", max_len)
        found = wit.exhaustive_emptiness(pa, threshold, max_len, budget=args.budget)
        sat, word = (found.word is not None), found.word
    elif args.method == "convex2":
        report.fact("method", "convex2")
        sat, word = emptiness_2ambiguous(pa, threshold)
    else:
        sat, word = _emptiness_auto(pa, threshold, args, report)
    if not sat:
        report.fact("result", "UNSAT", "result: UNSAT (no word exceeds the threshold)")
        return UNSAT
    value = acceptance_probability(pa, word)
    report.fact("result", "SAT")
    report.fact("witness", format_word(word, pa.alphabet))
    report.ratio("value", value)
    return SAT


def cmd_value(args) -> int:
    pa = _load_automaton(args.file)
    eps = parse_ratio(args.epsilon)
    allow = args.allow_k is not None and args.k <= args.allow_k
    report = Reporter(args.porcelain)
    output = approximate_value(pa, args.k, eps, allow_large_k=allow)
    report.fact("k", args.k)
    report.fact("epsilon", format_ratio(eps))
    report.ratio("output", output)
    return SAT


def cmd_pareto(args) -> int:
    dag = parse_dag(_read(args.file))
    report = Reporter(args.porcelain)
    if args.convex2:
        if dag.k != 2:
            raise PbaError("--convex2 requires a two-objective instance")
        curve = convex_pareto_2(dag)
        mode = "convex2"
    elif args.epsilon is not None:
        curve = epsilon_convex_pareto(dag, parse_ratio(args.epsilon),
                                      budget=args.budget)
        mode = f"epsilon={args.epsilon}"
    else:
        curve = exact_pareto(dag, budget=args.budget)
        mode = "exact"
    report.fact("mode", mode)
    report.fact("k", dag.k)
    report.fact("size", len(curve))
    for member in curve:
        cells = [format_ratio(w) for w in member.weight]
        cells.append(format_ratio(member.value))
        report.fact("member", "\t".join(cells), "member: " + " ".join(cells))
    if args.csv:
        write_curve_csv(curve, dag.k, args.csv)
        report.fact("csv", args.csv, f"wrote {args.csv}")
    if args.svg:
        render_curve_svg(curve, dag.k, args.svg, title=f"curve ({mode})")
        report.fact("svg", args.svg, f"wrote {args.svg}")
    return SAT


def cmd_reduce(args) -> int:
    pa = _load_automaton(args.file)
    report = Reporter(args.porcelain)
    dag = reduce_to_dag(
        pa,
        args.k,
        length_bound=args.max_len,
        allow_large_k=args.allow_k is not None and args.k <= args.allow_k,
        budget=args.budget,
    )
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(serialize_dag(dag))
    report.fact("k", args.k)
    report.fact("vertices", len(dag.vertices))
    report.fact("edges", len(dag.edges))
    report.fact("out", args.output, f"wrote {args.output}")
    return SAT


def cmd_shorten(args) -> int:
    pa = _load_automaton(args.file)
    word = parse_word(args.word, pa.alphabet)
    report = Reporter(args.porcelain)
    before = acceptance_probability(pa, word)
    if args.k is not None:
        bound = wit.witness_bound(pa, args.k)
        shortened = wit.shorten_witness_k(pa, args.k, word)
    else:
        bound = wit.witness_bound(pa)
        shortened = wit.shorten_witness_finite(pa, word)
    after = acceptance_probability(pa, shortened)
    report.fact("bound", bound)
    report.fact("input-length", len(word))
    report.fact("output-length", len(shortened))
    report.fact("word", format_word(shortened, pa.alphabet))
    report.ratio("value-before", before)
    report.ratio("value-after", after)
    return SAT


def _parse_homomorphism(text: str) -> Homomorphism:
    mapping = {}
    for item in text.split(","):
        if "=" not in item:
            raise PbaError(f"malformed substitution item {item!r}; use letter=image")
        letter, image = item.split("=", 1)
        mapping[letter] = image
    return Homomorphism(mapping)


def cmd_generate(args) -> int:
    if args.family == "bin":
        pa = bin_automaton()
    elif args.family == "clique":
        pa = clique_automaton(parse_graph(_read(args.graph)))
    elif args.family == "isolation":
        pa = isolation_instance(
            _parse_homomorphism(args.phi1), _parse_homomorphism(args.phi2)
        )
    elif args.family == "dfa-intersect":
        pa = dfa_intersection_automaton([_load_automaton(path) for path in args.files])
    else:  # random
        pa = random_k_ambiguous(args.n, args.k, args.seed)
    text = serialize_automaton(pa)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return SAT


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--porcelain", action="store_true",
                        help="machine-readable output, one fact per line")
    common.add_argument("--budget", type=int, default=None,
                        help="search/frontier budget (default: PBA_BUDGET)")

    parser = argparse.ArgumentParser(
        prog="pba",
        description="Analyse finitely ambiguous probabilistic automata "
                    "with exact rational arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common],
                       help="decide the ambiguity class of an automaton")
    p.add_argument("file")
    p.add_argument("--max-k", type=int, default=None,
                   help="cap for the exact ambiguity search (default: |Q|^2)")
    p.add_argument("--profile", type=int, default=None, metavar="L",
                   help="also print max run counts for word lengths up to L")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("emptiness", parents=[common],
                       help="does some word exceed the threshold strictly")
    p.add_argument("file")
    p.add_argument("--threshold", required=True, metavar="N/D")
    p.add_argument("--method", choices=["auto", "exhaustive", "convex2"],
                   default="auto")
    p.add_argument("--max-len", type=int, default=None,
                   help="length bound for exhaustive search "
                        "(default: the witness bound)")
    p.set_defaults(func=cmd_emptiness)

    p = sub.add_parser("value", parents=[common],
                       help="approximate the value within a (1+eps) factor")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", required=True, metavar="N/D")
    p.add_argument("--allow-k", type=int, default=None,
                   help="permit reductions up to this k")
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("pareto", parents=[common],
                       help="compute a (convex/approximate) Pareto curve "
                            "of a stochastic-path instance")
    p.add_argument("file", help=".spg instance")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", help="exact curve (default)")
    group.add_argument("--epsilon", metavar="N/D",
                       help="(1+eps)-covering curve")
    group.add_argument("--convex2", action="store_true",
                       help="convex curve (two objectives only)")
    p.add_argument("--csv", metavar="OUT.csv", help="write members as CSV")
    p.add_argument("--svg", metavar="OUT.svg", help="render the curve as SVG")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("reduce", parents=[common],
                       help="reduce an automaton to a stochastic-path instance")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-len", type=int, default=None,
                   help="length bound of the reduction (default: n^k)")
    p.add_argument("--allow-k", type=int, default=None)
    p.add_argument("-o", "--output", required=True, metavar="OUT.spg")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("shorten", parents=[common],
                       help="shorten a word without decreasing its probability")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, default=None,
                       help="k-ambiguous mode: bound n^k")
    group.add_argument("--finite", action="store_true",
                       help="finitely ambiguous mode: bound (n+1)!")
    p.set_defaults(func=cmd_shorten)

    p = sub.add_parser("generate", parents=[common],
                       help="write one of the benchmark automaton families")
    gen = p.add_subparsers(dest="family", required=True)
    g = gen.add_parser("bin", parents=[common])
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("clique", parents=[common])
    g.add_argument("--graph", required=True, metavar="FILE.g")
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("isolation", parents=[common])
    g.add_argument("--phi1", required=True, metavar="SPEC",
                   help="substitution, e.g. a=10,b=1")
    g.add_argument("--phi2", required=True, metavar="SPEC")
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("dfa-intersect", parents=[common])
    g.add_argument("files", nargs="+", metavar="FILE.pa")
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("random", parents=[common])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceededError, PrecisionError) as exc:
        print(f"pba: {exc}", file=sys.stderr)
        return BUDGET
    except (PbaError, OSError, ValueError) as exc:
        print(f"pba: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
