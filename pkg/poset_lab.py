#!/usr/bin/env python3
"""
Poset Lab
Main lab class that ties the modules together: one method per experiment,
each returning plain result dictionaries ready for the report generator.
"""

import json
import logging
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import networkx as nx
import pandas as pd

from chain_machinery import diamond_lb, minmax_stats
from container_engine import ContainerOutput, container_census, run_container, verify_container
from embedding_engine import count_copies, find_copy
from errors import BadParam
from extremal_lab import (counting_exponent, d_param, la_exact, m_count, min_copies_table,
                          poset_params, x_search)
from lab_config import get_config
from poset_core import Poset, classify_tree, is_connected, m_values, parse_poset
from random_lab import (RandomExperiment, du_bound_probe, largest_free_in_sample,
                        removal_construction, run_experiment_config, threshold_sweep)
from report_generator import ReportGenerator
from subset_lattice import SetFamily, lubell, parse_family
from tree_counting import (build_layered_witness, height_two_tree_run, layered_witness_check,
                           tree_count_lemma)

logger = logging.getLogger(__name__)


def load_digraph(text: str) -> nx.DiGraph:
    """A digraph from '@file.json' or inline JSON {"nodes": k, "edges": [[u, v], ...]}."""
    text = text.strip()
    if text.startswith("@"):
        with open(Path(text[1:]), "r", encoding="utf-8") as f:
            data = json.load(f)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BadParam(f"cannot parse digraph '{text}'") from exc
    graph = nx.DiGraph()
    graph.add_nodes_from(range(int(data.get("nodes", 0))))
    graph.add_edges_from(tuple(edge) for edge in data.get("edges", []))
    return graph


class PosetLab:
    """
    Forbidden-subposet laboratory: parameters, copy counts, extremal
    numbers, containers, chain statistics and random-model experiments
    """

    def __init__(self, seed: Optional[int] = None, threads: Optional[int] = None):
        self.config = get_config()
        settings = self.config["settings"]
        self.seed = settings["default_seed"] if seed is None else seed
        self.threads = threads or settings["default_threads"]
        self.reports = ReportGenerator()

    def poset(self, text) -> Poset:
        return text if isinstance(text, Poset) else parse_poset(text)

    def family(self, text) -> SetFamily:
        return text if isinstance(text, SetFamily) else parse_family(text)

    # --- parameters and copies ------------------------------------------------

    def params(self, poset, with_d: bool = True) -> Dict[str, Any]:
        """
        Poset parameters e, e*, x, x*, d, d*; for diamonds also m_s and m*_s

        Args:
            poset: Poset or CLI poset string
            with_d: also compute d and d* (can be slow for larger posets)

        Returns:
            Dictionary of parameters
        """
        P = self.poset(poset)
        result = {"poset": str(P), "size": P.size, **poset_params(P, with_d).to_json(),
                  "tree": classify_tree(P).value}
        if P.name.startswith("diamond:"):
            values = m_values(P.size - 2)
            result.update({"m_s": values.m_s, "m_star_s": values.m_star_s,
                           "m_star_window": list(values.window)})
        if is_connected(P) and P.size > 1:
            witness = x_search(P).witness
            if witness is not None:
                result["x_witness"] = witness.to_json()
        return result

    def free_check(self, poset, family, induced: bool = False) -> Dict[str, Any]:
        P, F = self.poset(poset), self.family(family)
        copy = find_copy(P, F, induced)
        return {"poset": str(P), "induced": induced, "family_size": len(F),
                "free": copy is None, "witness": None if copy is None else copy.to_json()}

    def count(self, poset, family, induced: bool = False) -> Dict[str, Any]:
        P, F = self.poset(poset), self.family(family)
        counted = count_copies(P, F, induced)
        return {"poset": str(P), "induced": induced, "family_size": len(F),
                "copies": counted.copies, "embeddings": counted.embeddings}

    def la(self, n: int, poset, induced: bool = False) -> Dict[str, Any]:
        P = self.poset(poset)
        result = la_exact(n, P, induced)
        return {"n": n, "poset": str(P), "induced": induced, "size": result.size,
                "method": result.method, "nodes": result.nodes,
                "witness": result.witness.to_json(use_codes=True)}

    def min_copies(self, n: int, poset, induced: bool = False) -> pd.DataFrame:
        P = self.poset(poset)
        table = min_copies_table(n, P, induced)
        return pd.DataFrame({"m": range(len(table)), "min_copies": table})

    def m_count(self, n: int, poset, induced: bool = False) -> Dict[str, Any]:
        P = self.poset(poset)
        return {"n": n, "poset": str(P), "induced": induced, "M": m_count(n, P, induced)}

    def counting(self, n: int, poset, induced: bool = False) -> Dict[str, Any]:
        P = self.poset(poset)
        result = counting_exponent(n, P, induced)
        floor = 2 ** la_exact(n, P, induced).size
        return {"n": n, "free_families": result.free_families, "exponent": result.exponent,
                "e": result.e, "la_floor_holds": result.free_families >= floor}

    def d(self, poset, induced: bool = False, mode: Optional[str] = None) -> Dict[str, Any]:
        result = d_param(self.poset(poset), induced, mode)
        return {"d": result.value, "attained_by": result.attained_by.to_json(),
                "mode": result.mode, "candidates": result.candidates}

    # --- chains -------------------------------------------------------------

    def chain_stats(self, family, method: str = "dp", samples: int = 10000) -> Dict[str, Any]:
        F = self.family(family)
        stats = minmax_stats(F, method, samples, self.seed)
        result = stats.to_json()
        result["lubell"] = lubell(F)
        return result

    def diamond_lb(self, family, s: int) -> Dict[str, Any]:
        return {"s": s, "lower_bound": diamond_lb(self.family(family), s)}

    # --- trees ----------------------------------------------------------------

    def tree_count(self, poset, family=None, digraph: Optional[str] = None,
                   layers: Optional[int] = None, eps_prime: Fraction = Fraction(1, 8)) -> Dict[str, Any]:
        """
        Tree counting in three forms: the pruning lemma on a digraph, the
        height-2 route through a family's comparability graph, or a
        layered witness built from a family for a monotone tree.
        """
        T = self.poset(poset)
        if digraph is not None:
            return tree_count_lemma(load_digraph(digraph), T).to_json()
        if family is None:
            raise BadParam("tree-count needs a family or a digraph")
        F = self.family(family)
        if layers is None:
            return height_two_tree_run(F, T).to_json()
        witness = build_layered_witness(F, layers, Fraction(eps_prime))
        ok, bound = layered_witness_check(witness, T)
        return {"witness": witness.to_json(), "conditions_hold": ok, "copy_lower_bound": bound}

    # --- containers ---------------------------------------------------------

    def container(self, family, t: int, r: int, eps) -> Dict[str, Any]:
        F = self.family(family)
        out = run_container(F, t, r, Fraction(eps))
        result = out.to_json()
        result["report"] = verify_container(out, F, t, r, Fraction(eps)).to_json()
        return result

    def verify(self, output: Dict[str, Any], family) -> Dict[str, Any]:
        out = ContainerOutput.from_json(output)
        report = verify_container(out, self.family(family), out.t, out.r, out.eps)
        return report.to_json()

    def census(self, n: int, t: int, r: int, eps, generator: str = "greedy",
               trials: int = 10) -> pd.DataFrame:
        return container_census(n, t, r, Fraction(eps), generator, trials, self.seed)

    # --- random model -------------------------------------------------------

    def random(self, n: int, p, poset, induced: bool = False,
               seeds: Optional[Sequence[int]] = None) -> pd.DataFrame:
        """Removal construction and largest free subfamily, one row per seed."""
        P = self.poset(poset)
        rows: List[Dict[str, Any]] = []
        for seed in seeds or [self.seed]:
            experiment = RandomExperiment.draw(n, p, seed)
            family, removed = removal_construction(n, p, seed, P, induced)
            best = largest_free_in_sample(experiment.sample, P, induced)
            scale = experiment.p * comb(n, n // 2)
            rows.append({"n": n, "p": str(experiment.p), "seed": seed,
                         "sample": len(experiment.sample), "removal_size": len(family),
                         "removed": removed, "largest_free": best.size, "exact_flag": best.exact,
                         "normalized": float(best.size / scale) if scale else None})
        return pd.DataFrame(rows)

    def sweep(self, poset, induced: bool, ns: Sequence[int], gammas: Sequence[float],
              seeds: Sequence[int]) -> pd.DataFrame:
        return threshold_sweep(self.poset(poset), induced, ns, gammas, seeds, self.threads)

    def sweep_config(self, config: Dict[str, Any]) -> pd.DataFrame:
        return run_experiment_config(config, self.threads)

    def du_probe(self, n: int, p, seeds: Sequence[int], s: int, t: int) -> pd.DataFrame:
        return du_bound_probe(n, p, seeds, s, t)

    # --- reports --------------------------------------------------------------

    def create_report(self, title: str, result: Any, fmt: str = "markdown") -> str:
        return self.reports.render(result, fmt, title)

    def save_report(self, content: str, filename: str, fmt: str = "markdown") -> str:
        return self.reports.save_report(content, filename, fmt)


def main():
    """Demo function"""
    logging.basicConfig(level=logging.INFO)
    lab = PosetLab()
    print("Poset Lab - Demo")
    print("=" * 30)
    params = lab.params("diamond:4", with_d=False)
    print(lab.create_report("Parameters of diamond:4", params))
    print(lab.la(4, "chain:3"))
    print(lab.random(10, Fraction(1, 30), "chain:2", seeds=[1, 2, 3]))


if __name__ == "__main__":
    main()
