"""Selection bases: the programs and preferences that drive source selection."""
from dataclasses import dataclass, field
from pathlib import Path

from ..analysis import QD_PREDICATES, qa_program
from ..errors import ManifestError, ParseError, SelektaError, VocabularyConflict
from ..logic.parser import parse_program
from ..logic.terms import Label, Program, Rule
from ..preference import validate_declarations

# Predefined source-description predicates.
SD_PREDICATES = frozenset({
    ("accurate", 3), ("covers", 3), ("specialized", 2), ("relevant", 2),
    ("avg_download_time", 2), ("avg_down_time", 2), ("charge", 2),
    ("source_type", 3), ("source_language", 2), ("data_format", 2),
    ("update_frequency", 2), ("last_update", 2), ("reliable", 2),
    ("source", 1), ("up", 1),
})
ONTOLOGY_PREDICATES = frozenset({("class", 1), ("synonym", 2), ("class_att", 2), ("instance", 2)})
QUERY_SOURCE = ("query_source", 2)
DEFAULT_PREDICATES = frozenset({("default_class", 3), ("default_path", 3)})


def default_label_args(rule: Rule):
    """Variables of a rule in order of first occurrence (head first)."""
    seen = []
    lits = ([rule.head] if rule.head else []) + list(rule.pos) + list(rule.neg)
    for l in lits:
        for v in l.variables():
            if v not in seen and not v.is_anonymous:
                seen.append(v)
    for b in rule.builtins:
        for v in b.variables():
            if v not in seen and not v.is_anonymous:
                seen.append(v)
    return tuple(seen)


@dataclass(frozen=True)
class Vocabulary:
    qd: frozenset
    sd: frozenset
    dom: frozenset
    aux: frozenset

    def category(self, sig):
        for name in ("qd", "sd", "dom", "aux"):
            if sig in getattr(self, name):
                return name
        if sig == QUERY_SOURCE:
            return "sel"
        if sig in DEFAULT_PREDICATES:
            return "default"
        return None

    def in_dagger(self, sig) -> bool:
        """Predicates kept when restricting a body to its context part."""
        return sig in self.qd or sig in self.sd or sig in self.dom or sig in DEFAULT_PREDICATES


def _parse_sigs(text):
    out = set()
    for item in text.replace(",", " ").split():
        if "/" not in item:
            raise ManifestError(f"predicate {item!r} must be written name/arity")
        name, ar = item.rsplit("/", 1)
        out.add((name, int(ar)))
    return out


def infer_vocabulary(sd: Program, dom: Program, aux_rules, overrides=None) -> Vocabulary:
    overrides = overrides or {}
    qd = set(QD_PREDICATES)
    sd_v = set(SD_PREDICATES) | sd.head_predicates() | set(overrides.get("sd", ()))
    dom_v = set(ONTOLOGY_PREDICATES) | dom.head_predicates() | set(overrides.get("dom", ()))
    aux_v = {r.head.signature for r in aux_rules if r.head is not None} - {QUERY_SOURCE}
    aux_v |= set(overrides.get("aux", ()))
    # body-only predicates belong to the part that mentions them
    for prog, target in ((sd, sd_v), (dom, dom_v)):
        for sig in prog.predicates():
            if sig not in qd and sig not in sd_v and sig not in dom_v:
                target.add(sig)
    for a, b, an, bn in ((qd, sd_v, "qd", "sd"), (qd, dom_v, "qd", "dom"), (qd, aux_v, "qd", "aux"),
                         (sd_v, dom_v, "sd", "dom"), (sd_v, aux_v, "sd", "aux"),
                         (dom_v, aux_v, "dom", "aux")):
        clash = a & b
        if clash:
            names = ", ".join(f"{n}/{k}" for n, k in sorted(clash))
            raise VocabularyConflict(f"{names} in both {an} and {bn} vocabularies")
    return Vocabulary(frozenset(qd), frozenset(sd_v), frozenset(dom_v), frozenset(aux_v))


@dataclass(frozen=True)
class SelectionBase:
    qa: Program
    sd: Program
    dom: Program
    core: tuple
    aux: tuple
    weak: tuple
    prefs: tuple
    vocab: Vocabulary

    @classmethod
    def from_programs(cls, sd: Program, dom: Program, sel: Program, qa: Program = None,
                      vocab_overrides=None) -> "SelectionBase":
        core, aux = [], []
        for r in sel.rules:
            if r.head is not None and r.head.signature == QUERY_SOURCE and not r.head.negated:
                if r.label is None or not r.label.args:
                    name = r.label.name if r.label else None
                    if name is not None:
                        r = r.relabel(Label(name, default_label_args(r)))
                core.append(r)
            else:
                aux.append(r)
        vocab = infer_vocabulary(sd, dom, aux, vocab_overrides)
        base = cls(qa or qa_program(), sd, dom, tuple(core), tuple(aux), tuple(sel.weak),
                   tuple(sel.preferences), vocab)
        base.validate()
        return base

    def validate(self):
        for r in self.aux:
            if r.head is None:
                continue
            sig = r.head.signature
            if sig == QUERY_SOURCE:
                if not r.head.negated:
                    raise SelektaError(f"auxiliary rule derives query_source: {r}")
            elif sig not in self.vocab.aux:
                raise VocabularyConflict(f"auxiliary rule head {r.head} is not auxiliary")
        declared = {}
        for r in self.core:
            if r.label is not None:
                declared.setdefault(r.label.name, set()).add(len(r.label.args))
        validate_declarations(self.prefs, declared)

    def sel_program(self) -> Program:
        return Program(self.core + self.aux, self.weak, self.prefs)

    def context_program(self) -> Program:
        """qa + sd + dom, the part that does not depend on the selection rules."""
        return self.qa + self.sd + self.dom


@dataclass
class Manifest:
    path: Path
    entries: dict = field(default_factory=dict)

    def files(self, key):
        raw = self.entries.get(key, "")
        return [self.path.parent / p.strip() for p in raw.split(",") if p.strip()]


def read_manifest(path) -> Manifest:
    path = Path(path)
    entries = {}
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip() if not line.lstrip().startswith("#") else ""
        if not line:
            continue
        if ":" not in line:
            raise ManifestError(f"{path}:{n}: expected 'key: value'")
        key, value = line.split(":", 1)
        key = key.strip()
        if key in entries and key != "retract":
            entries[key] += "," + value.strip()
        elif key == "retract" and key in entries:
            entries[key] += " " + value.strip()
        else:
            entries[key] = value.strip()
    for key in ("sd", "dom", "sel"):
        if key not in entries:
            raise ManifestError(f"{path}: missing '{key}:' entry")
    return Manifest(path, entries)


def _load_files(paths):
    prog = Program()
    for p in paths:
        try:
            text = Path(p).read_text(encoding="utf-8")
        except OSError as e:
            raise ManifestError(f"cannot read {p}: {e.strerror}")
        try:
            prog = prog + parse_program(text)
        except ParseError as e:
            raise ParseError(f"{p}:{e}") from None
    return prog


def _retract(prog: Program, facts):
    if not facts:
        return prog
    return Program(tuple(r for r in prog.rules if not (r.is_fact and r.head in facts)),
                   prog.weak, prog.preferences)


def load_base(manifest_path) -> SelectionBase:
    """Build a selection base from a manifest file.

    Keys: ``qa``, ``sd``, ``dom``, ``sel`` (comma-separated paths, relative
    to the manifest; ``qa`` defaults to the built-in analysis rules),
    ``vocab.sd`` / ``vocab.dom`` / ``vocab.aux`` (name/arity lists) and
    ``retract`` (facts removed from sd and dom).
    """
    m = read_manifest(manifest_path)
    qa = _load_files(m.files("qa")) if m.entries.get("qa", "builtin") != "builtin" else None
    sd = _load_files(m.files("sd"))
    dom = _load_files(m.files("dom"))
    sel = _load_files(m.files("sel"))
    if "retract" in m.entries:
        gone = set(parse_program(m.entries["retract"]).facts)
        sd, dom = _retract(sd, gone), _retract(dom, gone)
    overrides = {k[len("vocab."):]: _parse_sigs(v) for k, v in m.entries.items()
                 if k.startswith("vocab.")}
    return SelectionBase.from_programs(sd, dom, sel, qa, overrides)
