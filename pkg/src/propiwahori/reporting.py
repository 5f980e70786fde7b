"""Report emission: canonical JSON, TSV summaries, matplotlib figures.

The JSON document is the authoritative machine-readable output; when a
figures directory is given, a delimited TSV summary and PNG renderings of
the headline tables are written next to it.
"""

from __future__ import annotations

import json
import os


def dump_json(report, path=None) -> str:
    text = json.dumps(report, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def _tsv(path, header, rows):
    with open(path, "w") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(x) for x in row) + "\n")


def summary_rows(report):
    cmd = report["command"]
    if cmd == "verify":
        header = ["relation", "pass", "fail"]
        rows = [
            (rel, counts["pass"], counts["fail"])
            for rel, counts in sorted(report["counts"].items())
        ]
    elif cmd == "bernstein-table":
        header = ["lattice", "weyl_word", "length", "n_terms", "integral"]
        rows = [
            (r["lattice"], r["weyl_word"], r["length"], r["n_terms"], r["integral"])
            for r in report["rows"]
        ]
    elif cmd == "std-module":
        header = ["theta", "twist", "dim", "dim_equals_W", "relations_ok", "delta_X"]
        rows = [
            (
                r["theta"],
                r["twist_word"],
                r["dim"],
                r["dim_equals_W"],
                r["relations_ok"],
                r["delta_X"],
            )
            for r in report["modules"]
        ]
    elif cmd == "induce":
        header = ["theta", "sigma_id", "dim", "expected_dim", "invertible_intertwiner"]
        rows = [
            (r["theta"], r["sigma_id"], r["dim"], r["expected_dim"], r["invertible_intertwiner"])
            for r in report["rows"]
        ]
    elif cmd == "supersingular-search":
        header = ["character_id", "index", "dim", "irreducible", "supersingular"]
        rows = [
            (r["character_id"], r["index"], r["dim"], r["irreducible"], r["supersingular"])
            for r in report["rows"]
        ]
    elif cmd == "classify":
        header = ["delta_P", "sigma_id", "delta_Q", "dim", "irreducible", "supersingular"]
        rows = [
            (
                r["delta_P"],
                r["sigma_id"],
                r["delta_Q"],
                r["dim"],
                r["irreducible"],
                r.get("supersingular"),
            )
            for r in report["rows"]
        ]
    else:
        header, rows = ["key", "value"], sorted(
            (k, v) for k, v in report.items() if not isinstance(v, (list, dict))
        )
    return header, rows


def render_figures(report, outdir):
    """PNG figures plus the TSV summary for a report."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    cmd = report["command"]
    stem = os.path.join(outdir, f"{report['preset']}_p{report['p']}_{cmd}")
    header, rows = summary_rows(report)
    _tsv(stem + ".tsv", header, rows)
    written = [stem + ".tsv"]

    if cmd == "verify":
        rels = sorted(report["counts"])
        passes = [report["counts"][r]["pass"] for r in rels]
        fails = [report["counts"][r]["fail"] for r in rels]
        fig, ax = plt.subplots(figsize=(8, 3.5))
        ax.bar(rels, passes, color="#3b7a57", label="pass")
        ax.bar(rels, fails, bottom=passes, color="#b22222", label="fail")
        ax.set_ylabel("checks")
        ax.set_title(f"relation sweeps: {report['preset']} p={report['p']}")
        ax.legend()
        plt.setp(ax.get_xticklabels(), rotation=30, ha="right", fontsize=7)
        fig.tight_layout()
        fig.savefig(stem + ".png", dpi=150)
        plt.close(fig)
        written.append(stem + ".png")
    elif cmd == "bernstein-table":
        lengths = [r["length"] for r in report["rows"]]
        terms = [r["n_terms"] for r in report["rows"]]
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.scatter(lengths, terms, s=12, alpha=0.6)
        ax.set_xlabel("length")
        ax.set_ylabel("T-basis terms of E")
        ax.set_title(f"Bernstein expansions: {report['preset']} p={report['p']}")
        fig.tight_layout()
        fig.savefig(stem + ".png", dpi=150)
        plt.close(fig)
        written.append(stem + ".png")
    elif cmd == "classify":
        hom = report.get("hom_diagnostics")
        if hom:
            fig, ax = plt.subplots(figsize=(4.5, 4))
            im = ax.imshow(hom, cmap="viridis")
            ax.set_title("hom-space dimensions")
            fig.colorbar(im, ax=ax, shrink=0.8)
            fig.tight_layout()
            fig.savefig(stem + "_hom.png", dpi=150)
            plt.close(fig)
            written.append(stem + "_hom.png")
        dims = [r["dim"] for r in report["rows"]]
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.hist(dims, bins=range(1, max(dims) + 2), rwidth=0.8, align="left")
        ax.set_xlabel("dim I(P, sigma, Q)")
        ax.set_ylabel("count")
        ax.set_title(f"classified simple modules: {report['preset']} p={report['p']}")
        fig.tight_layout()
        fig.savefig(stem + "_dims.png", dpi=150)
        plt.close(fig)
        written.append(stem + "_dims.png")
    elif cmd in ("std-module", "induce", "supersingular-search"):
        key = {"std-module": "modules", "induce": "rows", "supersingular-search": "rows"}[cmd]
        dims = [r["dim"] for r in report[key]]
        if dims:
            fig, ax = plt.subplots(figsize=(5, 3))
            ax.hist(dims, bins=range(1, max(dims) + 2), rwidth=0.8, align="left")
            ax.set_xlabel("dimension")
            ax.set_ylabel("count")
            ax.set_title(f"{cmd}: {report['preset']} p={report['p']}")
            fig.tight_layout()
            fig.savefig(stem + ".png", dpi=150)
            plt.close(fig)
            written.append(stem + ".png")
    return written
