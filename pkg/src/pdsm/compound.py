"""Compound algorithms: partition, solve blocks elementally, reduce, repeat.

A :class:`CompoundRecipe` fixes every choice the procedure leaves open, so
a run is a pure function of ``(instance, recipe)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .elemental import DirectedTree, ElementalResult, path_tree, run_elemental
from .errors import StructureError
from .model import Instance, Matching
from .reduction import Partition, ReducedInstance, expand, reduce, singleton_matching


@dataclass(frozen=True)
class Level:
    partition: Partition
    block_plans: tuple

    def plans_by_block(self) -> list:
        """Plan per block, ``None`` for size-1 blocks."""
        it = iter(self.block_plans)
        return [next(it) if len(b) >= 2 else None for b in self.partition.blocks]


@dataclass(frozen=True)
class CompoundRecipe:
    levels: tuple
    final_plan: DirectedTree

    def check(self, p: int) -> None:
        """Raise :class:`StructureError` naming the first level that does not fit."""
        current = p
        for k, level in enumerate(self.levels):
            part = level.partition
            if part.p != current:
                raise StructureError(f"level {k}: partition covers {part.p} parties, problem has {current}")
            big = [b for b in part.blocks if len(b) >= 2]
            if len(level.block_plans) != len(big):
                raise StructureError(f"level {k}: {len(level.block_plans)} block plans for {len(big)} blocks of size >= 2")
            for b, plan in zip(big, level.block_plans):
                if plan.p != len(b):
                    raise StructureError(f"level {k}: plan for block {list(b)} spans {plan.p} parties")
            if len(part) >= current:
                raise StructureError(f"level {k}: party count does not decrease")
            current = len(part)
        if current < 2:
            raise StructureError("final problem has fewer than 2 parties")
        if self.final_plan.p != current:
            raise StructureError(f"final plan spans {self.final_plan.p} parties, last problem has {current}")

    def to_dict(self) -> dict:
        return {
            "levels": [
                {
                    "blocks": level.partition.to_list(),
                    "block_plans": [plan.to_dict() for plan in level.block_plans],
                }
                for level in self.levels
            ],
            "final_plan": self.final_plan.to_dict(),
        }


def recipe_from_dict(doc: dict, p: int) -> CompoundRecipe:
    """Parse a recipe document; structural faults raise :class:`StructureError`."""
    try:
        raw_levels = doc.get("levels", [])
        final = doc["final_plan"]["edges"]
    except (KeyError, TypeError, AttributeError) as exc:
        raise StructureError(f"recipe is missing {exc}") from None
    levels = []
    current = p
    for k, raw in enumerate(raw_levels):
        try:
            part = Partition(current, raw["blocks"])
            plans = tuple(
                DirectedTree(len(b), plan["edges"])
                for b, plan in zip([b for b in part.blocks if len(b) >= 2], raw.get("block_plans", []))
            )
        except StructureError as exc:
            raise StructureError(f"level {k}: {exc}") from None
        except (KeyError, TypeError) as exc:
            raise StructureError(f"level {k}: malformed ({exc})") from None
        levels.append(Level(part, plans))
        current = len(part)
    try:
        final_plan = DirectedTree(current, final)
    except StructureError as exc:
        raise StructureError(f"final plan: {exc}") from None
    recipe = CompoundRecipe(tuple(levels), final_plan)
    recipe.check(p)
    return recipe


def default_recipe(p, strategy: str = "path") -> CompoundRecipe:
    """Synthesize a recipe.

    ``path``: no levels, final path 0 -> 1 -> ... -> p-1.
    ``balanced-bisection``: split into two halves (the lower half takes the
    extra party), solve each half with a path tree, finish with one GS edge.
    """
    if isinstance(p, Instance):
        p = p.p
    if strategy == "path" or p == 2:
        if strategy not in ("path", "balanced-bisection"):
            raise ValueError(f"unknown strategy {strategy!r}")
        return CompoundRecipe((), path_tree(p))
    if strategy != "balanced-bisection":
        raise ValueError(f"unknown strategy {strategy!r}")
    half = (p + 1) // 2
    part = Partition(p, [range(half), range(half, p)])
    plans = tuple(path_tree(len(b)) for b in part.blocks if len(b) >= 2)
    return CompoundRecipe((Level(part, plans),), path_tree(2))


@dataclass
class LevelReport:
    parties_in: int
    parties_out: int
    ties: int
    rounds: int
    reduced: ReducedInstance = field(repr=False)


@dataclass(eq=False)
class CompoundResult:
    matching: Matching
    levels: list
    final: ElementalResult

    @property
    def total_rounds(self) -> int:
        return sum(lv.rounds for lv in self.levels) + self.final.total_rounds

    @property
    def ties(self) -> int:
        return sum(lv.ties for lv in self.levels)


def run_compound(instance: Instance, recipe: CompoundRecipe, *, backend=None) -> CompoundResult:
    recipe.check(instance.p)
    current = instance
    reports = []
    for level in recipe.levels:
        matchings = []
        rounds = 0
        for block, plan in zip(level.partition.blocks, level.plans_by_block()):
            if plan is None:
                matchings.append(singleton_matching(current.n))
                continue
            res = run_elemental(current.restrict(block), plan, backend=backend)
            matchings.append(res.matching)
            rounds += res.total_rounds
        red = reduce(current, level.partition, matchings)
        reports.append(LevelReport(current.p, red.derived.p, red.ties, rounds, red))
        current = red.derived
    final = run_elemental(current, recipe.final_plan, backend=backend)
    matching = final.matching
    for rep in reversed(reports):
        matching = expand(matching, rep.reduced)
    return CompoundResult(matching, reports, final)
