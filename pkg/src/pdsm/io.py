"""JSON file formats for instances, matchings, plans and recipes.

Instance::

    {"parties": [{"name": str, "members": [str, ...]}, ...],
     "prefs": {member: {party_name: [member, ...]}}}

Matching::

    {"families": [[member, ...], ...]}      # members in party order

Plan::

    {"edges": [[proposer, responder], ...]}  # or prufer:<seq>/orient:<mask>

Writers emit canonical text (2-space indent, document order, trailing
newline) so ``write(read(text)) == text`` for canonical input.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .compound import CompoundRecipe, recipe_from_dict
from .elemental import DirectedTree, parse_shorthand
from .errors import ParseError, StructureError, ValidationError
from .model import Instance, Matching


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _loads(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _expect(cond, where, msg):
    if not cond:
        raise ParseError(f"{where}: {msg}")


def instance_from_doc(doc) -> Instance:
    _expect(isinstance(doc, dict), "instance", "expected a JSON object")
    _expect("parties" in doc and "prefs" in doc, "instance", "needs 'parties' and 'prefs'")
    parties = doc["parties"]
    _expect(isinstance(parties, list) and parties, "parties", "expected a non-empty list")
    names, members = [], []
    for a, party in enumerate(parties):
        where = f"parties[{a}]"
        _expect(isinstance(party, dict), where, "expected an object")
        _expect(isinstance(party.get("name"), str), f"{where}.name", "expected a string")
        mem = party.get("members")
        _expect(isinstance(mem, list) and all(isinstance(s, str) for s in mem), f"{where}.members", "expected a list of strings")
        names.append(party["name"])
        members.append(mem)

    sizes = {len(m) for m in members}
    if len(sizes) != 1:
        raise ValidationError(
            [f"party {names[a]} has {len(m)} members, expected {len(members[0])}" for a, m in enumerate(members) if len(m) != len(members[0])]
        )
    p, n = len(members), len(members[0])
    if len(set(names)) != p:
        raise ValidationError(["party names are not distinct"])
    where_is = {}
    for a, mem in enumerate(members):
        for i, label in enumerate(mem):
            if label in where_is:
                raise ValidationError([f"member label {label!r} is used twice"])
            where_is[label] = (a, i)
    party_of = {name: a for a, name in enumerate(names)}

    prefs_doc = doc["prefs"]
    _expect(isinstance(prefs_doc, dict), "prefs", "expected an object")
    for label in prefs_doc:
        _expect(label in where_is, f"prefs[{label!r}]", "unknown member")
    prefs = np.full((p, n, p, n), -1, dtype=np.int64)
    problems = []
    for label, (a, i) in where_is.items():
        rows = prefs_doc.get(label, {})
        _expect(isinstance(rows, dict), f"prefs[{label!r}]", "expected an object of rows")
        for pname, row in rows.items():
            where = f"prefs[{label!r}][{pname!r}]"
            _expect(pname in party_of, where, "unknown party")
            _expect(isinstance(row, list) and all(isinstance(s, str) for s in row), where, "expected a list of member labels")
            b = party_of[pname]
            if b == a:
                problems.append(f"row {label}->{pname}: a member cannot rank its own party")
                continue
            if len(row) > n:
                problems.append(f"row {label}->{pname}: row has {len(row)} of {n} entries")
                continue
            for k, other in enumerate(row):
                pos = where_is.get(other)
                if pos is None or pos[0] != b:
                    problems.append(f"row {label}->{pname}: {other!r} is not a member of {pname}")
                    break
                prefs[a, i, b, k] = pos[1]
    if problems:
        raise ValidationError(problems)
    return Instance(names, members, prefs)


def instance_to_doc(instance: Instance) -> dict:
    prefs = {}
    for a in range(instance.p):
        for i in range(instance.n):
            prefs[instance.members[a][i]] = {
                instance.party_names[b]: [instance.members[b][j] for j in instance.prefs[a, i, b]]
                for b in range(instance.p)
                if b != a
            }
    return {
        "parties": [{"name": name, "members": list(mem)} for name, mem in zip(instance.party_names, instance.members)],
        "prefs": prefs,
    }


def read_instance(text: str) -> Instance:
    return instance_from_doc(_loads(text, "instance"))


def write_instance(instance: Instance) -> str:
    return dumps(instance_to_doc(instance))


def matching_from_doc(doc, instance: Instance) -> Matching:
    _expect(isinstance(doc, dict) and isinstance(doc.get("families"), list), "matching", "needs a 'families' list")
    fams = []
    for k, row in enumerate(doc["families"]):
        where = f"families[{k}]"
        _expect(isinstance(row, list) and len(row) == instance.p, where, f"expected {instance.p} member labels")
        out = []
        for a, label in enumerate(row):
            pos = instance.label_index.get(label)
            _expect(pos is not None, f"{where}[{a}]", f"unknown member {label!r}")
            _expect(pos.party == a, f"{where}[{a}]", f"{label!r} is not in party {instance.party_names[a]}")
            out.append(pos.member)
        fams.append(out)
    _expect(len(fams) == instance.n, "families", f"expected {instance.n} families, got {len(fams)}")
    return Matching(np.asarray(fams, dtype=np.int64).reshape(instance.n, instance.p))


def matching_to_doc(matching: Matching, instance: Instance) -> dict:
    return {"families": [[instance.members[a][i] for a, i in enumerate(row)] for row in matching.families]}


def read_matching(text: str, instance: Instance) -> Matching:
    return matching_from_doc(_loads(text, "matching"), instance)


def write_matching(matching: Matching, instance: Instance) -> str:
    return dumps(matching_to_doc(matching, instance))


def read_plan(text: str, p: int) -> DirectedTree:
    """A plan document, a path to one, or the prufer shorthand."""
    text = text.strip()
    if text.startswith("prufer:"):
        return parse_shorthand(text, p)
    if not text.startswith("{"):
        try:
            text = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"plan {text!r}: {exc.strerror}") from None
    doc = _loads(text, "plan")
    _expect(isinstance(doc, dict) and isinstance(doc.get("edges"), list), "plan", "needs an 'edges' list")
    try:
        edges = [(int(a), int(b)) for a, b in doc["edges"]]
    except (TypeError, ValueError):
        raise ParseError("plan.edges: expected [proposer, responder] integer pairs") from None
    return DirectedTree(p, edges)


def write_plan(tree: DirectedTree) -> str:
    return dumps(tree.to_dict())


def read_recipe(text: str, p: int) -> CompoundRecipe:
    doc = _loads(text, "recipe")
    _expect(isinstance(doc, dict), "recipe", "expected a JSON object")
    return recipe_from_dict(doc, p)


def write_recipe(recipe: CompoundRecipe) -> str:
    return dumps(recipe.to_dict())


__all__ = [
    "ParseError",
    "StructureError",
    "ValidationError",
    "instance_from_doc",
    "instance_to_doc",
    "matching_from_doc",
    "matching_to_doc",
    "read_instance",
    "read_matching",
    "read_plan",
    "read_recipe",
    "write_instance",
    "write_matching",
    "write_plan",
    "write_recipe",
]
