"""Command-line entry point: ``classleak <command> [options]``."""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import analysis, curves, leakage, metrics
from .binormal import BinormalModel, binormal_auroc, binormal_kl_pn
from .errors import ClassLeakError
from .score_model import ClassPriors, LabeledScores, estimate_priors, ingest

COMMANDS = (
    "metrics", "roc", "pr", "leakage", "auroc", "kl",
    "dominance", "operate", "binormal-family", "calibration",
)


class ParseError(Exception):
    def __init__(self, path, line, message):
        self.path, self.line = path, line
        super().__init__(f"{path}:{line}: {message}")


class UsageError(Exception):
    pass


def read_scores(path) -> LabeledScores:
    """Parse ``score,label`` lines; an optional ``score,label`` header is skipped."""
    rows = []
    first = True
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = [f.strip() for f in line.split(",")]
            if first and [f.lower() for f in fields] == ["score", "label"]:
                first = False
                continue
            first = False
            if len(fields) != 2:
                raise ParseError(path, lineno, f"expected 2 fields, got {len(fields)}")
            try:
                score = float(fields[0])
            except ValueError:
                raise ParseError(path, lineno, f"bad score {fields[0]!r}") from None
            if not math.isfinite(score):
                raise ParseError(path, lineno, f"non-finite score {fields[0]!r}")
            if fields[1] not in ("0", "1"):
                raise ParseError(path, lineno, f"label must be 0 or 1, got {fields[1]!r}")
            rows.append((score, int(fields[1])))
    if not rows:
        raise ParseError(path, 0, "no data rows")
    return ingest(rows)


def _floats(text: Optional[str]) -> List[float]:
    if text is None:
        return []
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"not a comma-separated list of numbers: {text!r}") from None


def _fmt_num(v: float) -> str:
    return repr(float(v))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="classleak",
        description="ROC/PR geometry from the class leakage function G = F_p o F_n^-1.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", action="append", default=[], help="score,label file (repeat for dominance)")
    p.add_argument("--output", help="output file, or directory for multi-table commands")
    p.add_argument("--grid", type=int, default=leakage.DEFAULT_GRID)
    p.add_argument("--pi-p", type=float, dest="pi_p")
    p.add_argument("--tau", type=float)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--cap-m", type=float, dest="cap_m")
    p.add_argument("--cost-fp", type=float, dest="cost_fp", default=1.0)
    p.add_argument("--cost-fn", type=float, dest="cost_fn", default=1.0)
    p.add_argument("--cost-max", type=float, dest="cost_max")
    p.add_argument("--alphas")
    p.add_argument("--bs")
    p.add_argument("--pi-ps", dest="pi_ps")
    p.add_argument("--format", choices=("table", "structured"), default="table")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--plot", help="also render curve tables to this SVG file")
    return p


def _sources(args):
    """Leakage curves named on the command line, with their datasets if any."""
    out = []
    for path in args.input:
        data = read_scores(path)
        out.append((str(path), leakage.leakage_from_data(data), data))
    alphas, bs = _floats(args.alphas), _floats(args.bs)
    if alphas or bs:
        if not alphas or not bs:
            raise UsageError("--alphas and --bs must be given together")
        if len(alphas) != len(bs):
            if len(alphas) == 1:
                alphas = alphas * len(bs)
            elif len(bs) == 1:
                bs = bs * len(alphas)
            else:
                raise UsageError("--alphas and --bs lists must have equal length (or one value)")
        for a, b in zip(alphas, bs):
            model = BinormalModel.from_shape(a, b)
            out.append((f"binormal(alpha={a!r},b={b!r})", leakage.build_leakage_binormal(model), None))
    return out


def _single_source(args):
    srcs = _sources(args)
    if len(srcs) != 1:
        raise UsageError(f"{args.command} needs exactly one source (--input, or one --alphas/--bs pair)")
    return srcs[0]


def _priors(args, data) -> ClassPriors:
    if args.pi_p is not None:
        return ClassPriors.from_positive(args.pi_p)
    if data is None:
        raise UsageError("--pi-p is required for analytical (binormal) sources")
    return estimate_priors(data)


def _report_text(report, fmt) -> str:
    if fmt == "structured":
        return metrics.format_structured(report)
    return metrics.format_key_value(report)


def _leakage_table(curve, grid_size) -> str:
    u = np.linspace(0.0, 1.0, grid_size)
    g = np.asarray(curve(u), dtype=float)
    ginv = np.asarray(curve.inverse(u), dtype=float)
    lines = [f"# kind=LEAKAGE grid={grid_size} source={curve.source}", "u,G,G_inverse"]
    lines += [f"{a!r},{b!r},{c!r}" for a, b, c in zip(u.tolist(), g.tolist(), ginv.tolist())]
    return "\n".join(lines) + "\n"


def _plot(tables, path, stderr):
    """Best-effort SVG rendering; never fails the command."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 5))
        for label, t in tables:
            ax.plot(t.x, t.y, label=label, lw=1)
        kind = tables[0][1].kind
        ax.set_xlabel("fpr" if kind == "ROC" else "recall")
        ax.set_ylabel("tpr" if kind == "ROC" else "precision")
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1.01)
        if len(tables) > 1:
            ax.legend(fontsize=6)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    except Exception as exc:  # rendering is optional
        print(f"warning: plot not written: {exc}", file=stderr)


class _Emitter:
    """Collects outputs; files are written only after all computation succeeded."""

    def __init__(self, args, stdout):
        self.args = args
        self.stdout = stdout
        self.files = []

    def single(self, text):
        if self.args.output:
            self.files.append((Path(self.args.output), text))
        else:
            self.stdout.write(text)

    def many(self, named_texts, manifest_rows):
        if not self.args.output:
            raise UsageError(f"{self.args.command} writes several tables; --output DIR is required")
        root = Path(self.args.output)
        for name, text in named_texts:
            self.files.append((root / name, text))
        self.files.append((root / "manifest.csv", "".join(manifest_rows)))

    def flush(self):
        for path, text in self.files:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)


def _cmd_metrics(args, out):
    if args.tau is None:
        raise UsageError("metrics needs --tau")
    if len(args.input) != 1:
        raise UsageError("metrics needs exactly one --input")
    data = read_scores(args.input[0])
    report = metrics.metrics_report(data, args.tau, _priors(args, data), args.beta)
    out.single(_report_text(report, args.format))


def _cmd_roc(args, out):
    name, curve, _ = _single_source(args)
    table = curves.roc_curve(curve, args.grid)
    out.single(table.to_text())
    return [(name, table)]


def _cmd_pr(args, out):
    name, curve, data = _single_source(args)
    pi_ps = _floats(args.pi_ps)
    if not pi_ps:
        table = curves.pr_curve(curve, _priors(args, data), args.grid)
        out.single(table.to_text())
        return [(name, table)]
    tables, named, manifest = [], [], ["kind,pi_p,file\n"]
    for pi in pi_ps:
        t = curves.pr_curve(curve, ClassPriors.from_positive(pi), args.grid)
        fname = f"pr_pi{pi!r}.csv"
        named.append((fname, t.to_text()))
        manifest.append(f"PR,{pi!r},{fname}\n")
        tables.append((f"pi_p={pi!r}", t))
    out.many(named, manifest)
    return tables


def _cmd_leakage(args, out):
    _, curve, _ = _single_source(args)
    out.single(_leakage_table(curve, args.grid))


def _cmd_auroc(args, out):
    _, curve, data = _single_source(args)
    geometric = leakage.auroc_from_leakage(curve, args.grid)
    report = {"source": curve.source, "auroc_geometric": geometric,
              "prob_neg_ge_pos": leakage.prob_negative_ge_positive(curve, args.grid)}
    if data is not None:
        exact_geo = 1 - curve.area_exact()
        exact_rank = leakage.auroc_rank_exact(data)
        if exact_geo != exact_rank:
            raise ClassLeakError(f"geometric {exact_geo} and rank {exact_rank} AUROC disagree")
        report.update(auroc_rank=float(exact_rank), identity_holds=True,
                      auroc_exact=f"{exact_rank.numerator}/{exact_rank.denominator}")
    else:
        closed = binormal_auroc(curve.model)
        report.update(auroc_closed_form=closed, abs_error=abs(geometric - closed),
                      grid=args.grid)
    out.single(_report_text(report, args.format))


def _cmd_kl(args, out):
    _, curve, _ = _single_source(args)
    eps = leakage.KL_CUTOFF
    kl = leakage.kl_divergence_from_leakage(curve, args.grid, eps)
    report = {"kl_pn_nats": kl, "cutoff": eps, "grid": args.grid}
    if isinstance(curve, leakage.BinormalLeakage):
        report["kl_closed_form"] = binormal_kl_pn(curve.model)
    out.single(_report_text(report, args.format))


def _cmd_dominance(args, out):
    srcs = _sources(args)
    if len(srcs) != 2:
        raise UsageError("dominance needs exactly two sources")
    (n1, g1, _), (n2, g2, _) = srcs
    grid = min(args.grid, 100_001)
    rep = analysis.compare_dominance(g1, g2, grid, args.epsilon)
    report = {"first": n1, "second": n2}
    report.update(rep.as_dict())
    out.single(_report_text(report, args.format))


def _cmd_operate(args, out):
    _, curve, data = _single_source(args)
    priors = _priors(args, data)
    if args.cap_m is None and args.cost_max is None:
        raise UsageError("operate needs --cap-m and/or --cost-max")
    report = {"pi_p": priors.pi_p}
    if args.cap_m is not None:
        pt = analysis.capped_admission_point(curve, priors, args.cap_m)
        report.update({f"cap_{k}": v for k, v in pt.as_dict().items()})
        report["cap_m"] = args.cap_m
    if args.cost_max is not None:
        con = analysis.OperatingConstraint.bounded_risk(
            args.cost_fp, args.cost_fn, args.cost_max, priors)
        rp = analysis.min_risk_point(curve, con, args.grid)
        report.update({f"risk_{k}": v for k, v in rp.as_dict().items()})
        report["risk_budget"] = args.cost_max
    out.single(_report_text(report, args.format))


def _cmd_family(args, out):
    alphas, bs, pi_ps = _floats(args.alphas), _floats(args.bs), _floats(args.pi_ps)
    if not alphas or not bs:
        raise UsageError("binormal-family needs --alphas and --bs")
    named, manifest, tables = [], ["kind,alpha,b,pi_p,file\n"], []
    for a, b in itertools.product(alphas, bs):
        curve = leakage.build_leakage_binormal(BinormalModel.from_shape(a, b))
        roc = curves.roc_curve(curve, args.grid)
        fname = f"roc_a{a!r}_b{b!r}.csv"
        named.append((fname, roc.to_text()))
        manifest.append(f"ROC,{a!r},{b!r},,{fname}\n")
        tables.append((f"a={a!r} b={b!r}", roc))
        for pi in pi_ps:
            pr = curves.pr_curve(curve, ClassPriors.from_positive(pi), args.grid)
            fname = f"pr_a{a!r}_b{b!r}_pi{pi!r}.csv"
            named.append((fname, pr.to_text()))
            manifest.append(f"PR,{a!r},{b!r},{pi!r},{fname}\n")
    out.many(named, manifest)
    return tables


def _cmd_calibration(args, out):
    if len(args.input) != 1:
        raise UsageError("calibration needs exactly one --input")
    data = read_scores(args.input[0])
    bins = metrics.reliability_bins(data, args.bins)
    if args.format == "structured":
        report = {"brier": metrics.brier_score(data), "bins": metrics.bins_report(bins)}
        out.single(metrics.format_structured(report))
        return
    lines = [f"brier={_fmt_num(metrics.brier_score(data))}\n"]
    for k, b in enumerate(bins):
        lines.append(
            f"bin{k}=center:{b.center!r} count:{b.count} "
            f"mean_score:{b.mean_score!r} positive_fraction:{b.positive_fraction!r}\n"
        )
    out.single("".join(lines))


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Emitter(args, stdout)
    try:
        if args.grid < 2:
            raise UsageError("--grid must be at least 2")
        cmd = args.command
        tables = None
        if cmd == "metrics":
            _cmd_metrics(args, out)
        elif cmd == "roc":
            tables = _cmd_roc(args, out)
        elif cmd == "pr":
            tables = _cmd_pr(args, out)
        elif cmd == "leakage":
            _cmd_leakage(args, out)
        elif cmd == "auroc":
            _cmd_auroc(args, out)
        elif cmd == "kl":
            _cmd_kl(args, out)
        elif cmd == "dominance":
            _cmd_dominance(args, out)
        elif cmd == "operate":
            _cmd_operate(args, out)
        elif cmd == "binormal-family":
            tables = _cmd_family(args, out)
        elif cmd == "calibration":
            _cmd_calibration(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return 1
    except ClassLeakError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    out.flush()
    if args.plot and tables:
        _plot(tables, args.plot, stderr)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
