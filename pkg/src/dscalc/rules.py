"""Validity rule table, loaded from the versioned design-space data file."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class Rule:
    name: str
    when: dict  # primitive name -> tuple of matching tags
    kind: str = "invalid"  # invalid | ignore
    ignore: tuple = ()
    doc: str = ""

    def fires(self, tags: dict) -> bool:
        """``tags`` maps primitive name -> assigned tag."""
        return all(tags.get(p) in match for p, match in self.when.items())

    @property
    def referenced(self) -> tuple:
        return tuple(self.when)


@dataclass(frozen=True)
class RuleTable:
    version: int
    invalid: tuple
    ignored: tuple
    tag_weights: dict
    grids: dict

    def violations(self, tags: dict) -> list:
        return [r.name for r in self.invalid if r.fires(tags)]

    def ignored_primitives(self, tags: dict) -> set:
        out = set()
        for r in self.ignored:
            if r.fires(tags):
                out.update(r.ignore)
        return out


def _parse_rules(raw, kind):
    return tuple(
        Rule(
            name=r["name"],
            when={p: tuple(tags) for p, tags in r["when"].items()},
            kind=kind,
            ignore=tuple(r.get("ignore", ())),
            doc=r.get("doc", ""),
        )
        for r in raw
    )


def load_rule_table() -> RuleTable:
    text = resources.files("dscalc.data").joinpath("design_space.json").read_text()
    doc = json.loads(text)
    return RuleTable(
        version=doc["version"],
        invalid=_parse_rules(doc["invalid_rules"], "invalid"),
        ignored=_parse_rules(doc["ignore_rules"], "ignore"),
        tag_weights={p: dict(w) for p, w in doc["tag_weights"].items()},
        grids=dict(doc["grids"]),
    )


DEFAULT_RULES = load_rule_table()
