"""
Replays the structural results over exhaustively enumerated small tournaments.

Each suite is a fixed list of checks; a check passes, fails, or is
undecided when a bounded search or the suite time budget runs out. A report
passes only when every check passes.
"""

import logging
import time
from typing import Literal

import networkx as nx
import pandas as pd
from pydantic import BaseModel, ConfigDict

from components.chromatic_solver import ChromaticSolver, chromatic_number, is_valid_coloring
from components.coloring_builder import explicit_coloring_A, explicit_coloring_D, is_valid_liu_form, liu_form, u3_hero_coloring
from components.containment_checker import (
    JewelSpec,
    contains_subtournament,
    find_transitive_subset,
    is_family_free,
    is_hero,
    is_jewel,
    is_minimal_nonhero,
)
from components.family_generator import family, minimal_nonheroes
from components.forest_analyzer import (
    BackedgeGraph,
    build_incomparable_map,
    find_forest_cut,
    find_forest_ordering,
    induced_ordering,
    is_forest_ordering,
    is_forest_tournament,
    valid_forest_cuts,
    verify_incomparable,
)
from components.isomorphism import canonical_form, enumerate_tournaments
from components.structure_analyzer import is_prime, member_A, member_AF, member_D, recompose, substitution_decomposition
from utils.errors import ConsistencyError, HeroixError, PreconditionError, UndecidedError
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)

SUITES = ("core", "forest", "classes", "heroes", "colorings")

# Isomorphism classes of tournaments on n vertices, n = 0..8
CLASS_COUNTS = (1, 1, 1, 2, 4, 12, 56, 456, 6880)


class CheckResult(BaseModel):
    """Outcome of one check."""

    model_config = ConfigDict(frozen=True)

    check_id: str
    status: Literal["pass", "fail", "undecided"]
    witness: str = ""


class VerifyReport(BaseModel):
    """Every check outcome of one verify run, in check order."""

    suite: str
    results: list[CheckResult]

    @property
    def passed(self):
        return all(result.status == "pass" for result in self.results)

    @property
    def exit_status(self):
        """0 when everything passed, 1 on any failure, 3 when only undecided checks remain."""
        statuses = {result.status for result in self.results}
        if "fail" in statuses:
            return 1
        if "undecided" in statuses:
            return 3
        return 0

    def to_frame(self):
        return pd.DataFrame([result.model_dump() for result in self.results], columns=["check_id", "status", "witness"])

    def render(self):
        """Plain-text table followed by a summary line."""
        frame = self.to_frame()
        counts = frame["status"].value_counts()
        summary = ", ".join(f"{counts.get(status, 0)} {status}" for status in ("pass", "fail", "undecided"))
        body = frame.to_string(index=False) if len(frame) else "(no checks)"
        verdict = "PASS" if self.passed else "FAIL"
        return f"{body}\n{self.suite}: {verdict} ({summary})"


def _rows(T):
    return "/".join(T.rows())


class VerificationHarness:
    """
    Runs the verification suites.

    Exhaustive sweeps stop at seven vertices, or at HEROIX_MAX_N when that is
    smaller; the eight-vertex sweeps run only when HEROIX_MAX_N allows it.
    """

    def __init__(self, budget_sec=None, long=False):
        """
        Initialize the VerificationHarness class.

        Args:
            budget_sec (float, optional): Time budget per suite, default HEROIX_VERIFY_BUDGET_SEC
            long (bool): Include the A_4 3-colourability refutation
        """
        settings = get_settings()
        self.budget_sec = settings.verify_budget_sec if budget_sec is None else budget_sec
        self.long = long
        self.max_n = settings.max_n
        self.sweep_n = min(7, self.max_n)

    def checks(self, suite):
        """(check id, callable) pairs of a suite, in report order."""
        table = {
            "core": [
                ("core.class_counts", self.check_class_counts),
                ("core.transitive_scores", self.check_transitive_scores),
                ("core.stearns", self.check_stearns),
            ],
            "forest": [
                ("forest.named_members", self.check_forest_named),
                ("forest.properties", self.check_forest_properties),
                ("forest.incomparable_maps", self.check_incomparable_maps),
            ],
            "classes": [
                ("classes.membership_lemmas", self.check_membership_lemmas),
                ("classes.d_oracle", self.check_d_oracle),
                ("classes.a_oracle", self.check_a_oracle),
                ("classes.af_crosscheck", self.check_af_crosscheck),
                ("classes.decomposition_roundtrip", self.check_decomposition_roundtrip),
            ],
            "heroes": [
                ("heroes.equivalence", self.check_hero_equivalence),
                ("heroes.minimal_census", self.check_minimal_census),
                ("heroes.jewel_d3", self.check_jewel),
            ],
            "colorings": [
                ("colorings.chi_d", self.check_chi_d),
                ("colorings.chi_a", self.check_chi_a),
                ("colorings.explicit_d", self.check_explicit_d),
                ("colorings.explicit_a4", self.check_explicit_a4),
                ("colorings.liu_forms", self.check_liu_forms),
                ("colorings.u3_hero", self.check_u3_hero),
            ],
        }
        checks = list(table[suite])
        if suite == "colorings" and self.long:
            checks.append(("colorings.a4_refutation", self.check_a4_refutation))
        return checks

    def run(self, suite):
        """
        Run one suite, or every suite for "all".

        Args:
            suite (str): Suite name

        Returns:
            VerifyReport: Results in check order
        """
        if suite == "all":
            results = []
            for name in SUITES:
                results.extend(self.run(name).results)
            return VerifyReport(suite="all", results=results)
        if suite not in SUITES:
            raise PreconditionError(f"unknown suite {suite!r}")
        deadline = time.monotonic() + self.budget_sec
        results = []
        for check_id, check in self.checks(suite):
            if time.monotonic() > deadline:
                results.append(CheckResult(check_id=check_id, status="undecided", witness="suite time budget exhausted"))
                continue
            started = time.monotonic()
            try:
                ok, witness = check()
                status = "pass" if ok else "fail"
            except UndecidedError as e:
                status, witness = "undecided", str(e)
            except ConsistencyError as e:
                status, witness = "fail", f"consistency: {e}"
            except HeroixError as e:
                status, witness = "fail", f"{type(e).__name__}: {e}"
            elapsed = time.monotonic() - started
            marker = "✓" if status == "pass" else "✗"
            logger.info("%s %s %s in %.2fs", marker, check_id, status, elapsed)
            results.append(CheckResult(check_id=check_id, status=status, witness=witness))
        return VerifyReport(suite=suite, results=results)

    def _classes(self, n):
        return enumerate_tournaments(n)

    def _sweep(self, limit):
        for n in range(1, min(limit, self.max_n) + 1):
            yield from self._classes(n)

    # core

    def check_class_counts(self):
        top = min(8, self.max_n)
        for n in range(top + 1):
            found = len(self._classes(n))
            if found != CLASS_COUNTS[n]:
                return False, f"n={n}: {found} classes, expected {CLASS_COUNTS[n]}"
        return True, f"n<={top}"

    def check_transitive_scores(self):
        for T in self._sweep(self.sweep_n):
            if T.is_transitive() != nx.is_directed_acyclic_graph(T.to_networkx()):
                return False, _rows(T)
        return True, ""

    def check_stearns(self):
        sizes = [(4, 3)] + ([(8, 4)] if self.max_n >= 8 else [])
        for n, k in sizes:
            for T in self._classes(n):
                if find_transitive_subset(T, k) is None:
                    return False, f"no L_{k} in {_rows(T)}"
        return True, ", ".join(f"L_{k} in every T on {n}" for n, k in sizes)

    # forest

    def check_forest_named(self):
        named = minimal_nonheroes()
        expected = {"D3": False, "U3": True, "N": True, "S3": False, "Delta2": False}
        for name, T in named.items():
            if is_forest_tournament(T) != expected[name]:
                return False, name
        return True, ""

    def _forest_pairs(self):
        for T in self._sweep(self.sweep_n):
            ordering = find_forest_ordering(T)
            if ordering is not None:
                yield T, ordering

    def check_forest_properties(self):
        count = 0
        for T, ordering in self._forest_pairs():
            count += 1
            graph = BackedgeGraph(T, ordering)
            if not graph.is_acyclic():
                return False, f"backedge cycle in {_rows(T)}"
            cuts = valid_forest_cuts(T, ordering)
            if T.n > 1 and (not cuts or cuts[0] != find_forest_cut(T, ordering)):
                return False, f"leftmost cut disagrees with {cuts} on {_rows(T)}"
            for component in graph.components():
                if len(component) < 2:
                    continue
                sub, sub_order = induced_ordering(T, ordering, component)
                if BackedgeGraph(sub, sub_order).thickness() != 1:
                    return False, f"component {component} of {_rows(T)} has thickness != 1"
            if chromatic_number(T)[0] > 2:
                return False, f"χ > 2 for {_rows(T)}"
            for v in range(T.n):
                rest = [u for u in range(T.n) if u != v]
                if rest and not is_forest_ordering(*induced_ordering(T, ordering, rest)):
                    return False, f"deleting {v} breaks {_rows(T)}"
            if T.n <= 6 and not is_forest_tournament(T.complement()):
                return False, f"complement of {_rows(T)} is not forest"
        for T in self._sweep(min(6, self.sweep_n)):
            if not is_forest_tournament(T) and is_forest_tournament(T.complement()):
                return False, f"complement of non-forest {_rows(T)} is forest"
        return True, f"{count} forest classes"

    def check_incomparable_maps(self):
        for T, ordering in self._forest_pairs():
            for r in (1, 2, 5, 10):
                mapping = build_incomparable_map(T, ordering, r)
                if mapping.ordering != ordering or not verify_incomparable(T, mapping):
                    return False, f"r={r} on {_rows(T)}"
        return True, ""

    # classes

    def check_membership_lemmas(self):
        named = minimal_nonheroes()
        expected_a = {"D3": False, "U3": True, "N": False, "S3": False, "Delta2": True}
        expected_af = {"D3": False, "U3": True, "N": False, "S3": False, "Delta2": False}
        for name, T in named.items():
            if member_A(T).member != expected_a[name]:
                return False, f"member_A({name})"
            if member_AF(T).member != expected_af[name]:
                return False, f"member_AF({name})"
        return True, ""

    def _oracle(self, decide, name, top):
        for T in self._sweep(top):
            host = family(name, T.n)
            if decide(T).member != (contains_subtournament(host, T) is not None):
                return False, f"{name}: {_rows(T)}"
        return True, ""

    def check_d_oracle(self):
        return self._oracle(member_D, "D", 5)

    def check_a_oracle(self):
        return self._oracle(member_A, "A", 4)

    def check_af_crosscheck(self):
        for T in self._sweep(6):
            expected = member_A(T).member and find_forest_ordering(T) is not None
            if member_AF(T).member != expected:
                return False, _rows(T)
        return True, ""

    def check_decomposition_roundtrip(self):
        for T in self._sweep(6):
            rebuilt, labels = recompose(substitution_decomposition(T))
            if rebuilt != T.induced(list(labels)):
                return False, _rows(T)
        return True, ""

    # heroes

    def check_hero_equivalence(self):
        count = 0
        for T in self._sweep(self.sweep_n):
            is_hero(T)
            count += 1
        return True, f"{count} classes agree"

    def check_minimal_census(self):
        named = minimal_nonheroes()
        expected = {
            5: {canonical_form(named[k]) for k in ("U3", "N", "S3")},
            6: {canonical_form(named["Delta2"])},
            7: {canonical_form(named["D3"])},
        }
        for n in range(1, self.sweep_n + 1):
            found = {canonical_form(T) for T in self._classes(n) if is_minimal_nonhero(T)}
            if found != expected.get(n, set()):
                return False, f"n={n}: {len(found)} minimal non-heroes"
        return True, ""

    def check_jewel(self):
        C = family("C")
        return is_jewel(family("D", 3), JewelSpec(a=7, G=C, H=C)), ""

    # colorings

    def check_chi_d(self):
        for n in range(1, 5):
            k, coloring = chromatic_number(family("D", n))
            if k != n:
                return False, f"χ(D_{n}) = {k}"
        return True, ""

    def check_chi_a(self):
        for n in range(1, 4):
            k, _ = chromatic_number(family("A", n))
            if k != n:
                return False, f"χ(A_{n}) = {k}"
        return True, ""

    def check_explicit_d(self):
        for n in range(1, 7):
            coloring = explicit_coloring_D(n)
            if coloring.k != n or not is_valid_coloring(family("D", n), coloring):
                return False, f"D_{n}"
        return True, "n<=6"

    def check_explicit_a4(self):
        coloring = explicit_coloring_A(4)
        T = family("A", 4)
        return T.n == 31 and coloring.k == 4 and is_valid_coloring(T, coloring), ""

    def check_liu_forms(self):
        U3 = family("U", 3)
        count = 0
        for T in self._sweep(self.sweep_n):
            if T.n < 3 or not is_prime(T) or contains_subtournament(T, U3) is not None:
                continue
            count += 1
            if not is_valid_liu_form(T, liu_form(T)):
                return False, _rows(T)
        N, S3 = family("N"), family("S", 3)
        if liu_form(N).kind != "triple" or liu_form(S3).describe() != "cyclic(3)":
            return False, "named forms"
        return True, f"{count} prime U_3-free classes"

    def check_u3_hero(self):
        forbidden = [family("D", 3), family("U", 3)]
        worst = 0
        for T in self._sweep(8):
            if not is_family_free(T, forbidden):
                continue
            coloring = u3_hero_coloring(T, 3)
            if coloring.k > 3 or not is_valid_coloring(T, coloring):
                return False, _rows(T)
            worst = max(worst, chromatic_number(T)[0])
        return worst <= 3, f"max χ = {worst}"

    def check_a4_refutation(self):
        T = family("A", 4)
        found = ChromaticSolver(T).branch_and_bound_coloring(3)
        if found is not None:
            return False, f"3-colouring {found.assign}"
        return True, "no 3-colouring of A_4"
