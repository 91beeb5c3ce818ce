"""Corpus text cleaning, verb anchoring, and lemma-level train/test splitting."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .cloud import CLASSES, SPLITS
from .errors import ValidationError

#: Characters removed outright during cleaning (the full ASCII punctuation set).
PUNCTUATION = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~"

_PUNCT_TABLE = str.maketrans("", "", PUNCTUATION)
_WHITESPACE_RUN = re.compile(r"\s+")

#: Suffixes accepted when matching an inflected surface word to its base verb.
INFLECTION_SUFFIXES = ("s", "es", "ed", "d", "ing")

#: Irregular inflected form -> base verb.  The suffix rules below cover the
#: regular paradigm; this table catches the strong verbs (gave -> give, took
#: -> take, ...) that no suffix rule can reach.
IRREGULAR_FORMS = {
    "ate": "eat", "began": "begin", "begun": "begin", "been": "be", "being": "be",
    "blew": "blow", "blown": "blow", "bought": "buy", "broke": "break",
    "broken": "break", "brought": "bring", "built": "build", "came": "come",
    "caught": "catch", "chose": "choose", "chosen": "choose", "dealt": "deal",
    "did": "do", "done": "do", "drank": "drink", "drawn": "draw", "drew": "draw",
    "driven": "drive", "drove": "drive", "drunk": "drink", "eaten": "eat",
    "fallen": "fall", "fell": "fall", "felt": "feel", "flew": "fly",
    "flown": "fly", "forgot": "forget", "forgotten": "forget", "found": "find",
    "gave": "give", "given": "give", "gone": "go", "got": "get",
    "gotten": "get", "grew": "grow", "grown": "grow", "had": "have",
    "has": "have", "heard": "hear", "held": "hold", "hid": "hide",
    "hidden": "hide", "hung": "hang", "kept": "keep", "knew": "know",
    "known": "know", "laid": "lay", "led": "lead", "left": "leave",
    "lost": "lose", "made": "make", "meant": "mean", "met": "meet",
    "paid": "pay", "ran": "run", "rang": "ring", "ridden": "ride",
    "risen": "rise", "rode": "ride", "rose": "rise", "rung": "ring",
    "said": "say", "sang": "sing", "sat": "sit", "saw": "see", "seen": "see",
    "sent": "send", "shaken": "shake", "shook": "shake", "slept": "sleep",
    "sold": "sell", "sought": "seek", "spent": "spend", "spoke": "speak",
    "spoken": "speak", "stole": "steal", "stolen": "steal", "stood": "stand",
    "struck": "strike", "stuck": "stick", "sung": "sing", "swam": "swim",
    "swum": "swim", "taken": "take", "taught": "teach", "threw": "throw",
    "thrown": "throw", "told": "tell", "took": "take", "tore": "tear",
    "torn": "tear", "understood": "understand", "was": "be", "went": "go",
    "were": "be", "woke": "wake", "woken": "wake", "won": "win",
    "wore": "wear", "worn": "wear", "written": "write", "wrote": "write",
}


def clean_text(raw: str) -> str:
    """Remove punctuation, trim, collapse whitespace runs, lowercase — in that order."""
    s = raw.translate(_PUNCT_TABLE)
    s = s.strip()
    s = _WHITESPACE_RUN.sub(" ", s)
    return s.lower()


def match_verb_word(word: str, verb: str) -> bool:
    """Does a (cleaned) surface word realize the given base verb?

    Accepts the exact base, known irregular forms, the regular suffixes, and
    the standard spelling adjustments (consonant doubling and e-dropping
    before -ing/-ed, y -> i before -ies/-ied) as long as at least a
    3-character stem survives.
    """
    if word == verb:
        return True
    if IRREGULAR_FORMS.get(word) == verb:
        return True
    for suffix in INFLECTION_SUFFIXES:
        if word == verb + suffix:
            return True
    if len(verb) >= 3:
        doubled = verb + verb[-1]
        if word in (doubled + "ed", doubled + "ing"):
            return True
        if verb.endswith("e") and len(verb) - 1 >= 3 and word == verb[:-1] + "ing":
            return True
        if verb.endswith("y") and word in (verb[:-1] + "ied", verb[:-1] + "ies"):
            return True
    return False


def locate_verb_word(cleaned: str, verb: str) -> int | None:
    """Index of the first word in a cleaned sentence realizing the verb, or None."""
    for i, word in enumerate(cleaned.split(" ")):
        if match_verb_word(word, verb):
            return i
    return None


@dataclass(frozen=True)
class CorpusSample:
    raw_text: str
    clean_text: str
    lemma: str
    verb_class: str
    verb_word_index: int
    split: str | None = None


@dataclass
class ParsedCorpus:
    samples: list[CorpusSample]
    diagnostics: list[str]

    @property
    def skipped(self) -> int:
        return len(self.diagnostics)


def _base_verb(lemma: str) -> str:
    parts = lemma.split("_")
    if len(parts) < 2 or not all(parts):
        raise ValueError(f"lemma must be verb_particle-shaped, got {lemma!r}")
    return parts[0]


def parse_corpus(path: str | Path) -> ParsedCorpus:
    """Parse a ``text<TAB>lemma<TAB>class[<TAB>split]`` corpus file.

    Malformed rows never abort the parse: each one is skipped with a
    line-numbered diagnostic.  Blank lines are ignored.
    """
    samples: list[CorpusSample] = []
    diagnostics: list[str] = []
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) not in (3, 4):
            diagnostics.append(
                f"line {line_no}: expected 3 or 4 tab-separated fields, got {len(parts)}"
            )
            continue
        raw, lemma, verb_class = parts[0], parts[1], parts[2]
        split = parts[3] if len(parts) == 4 else None
        if verb_class not in CLASSES:
            diagnostics.append(f"line {line_no}: unknown class {verb_class!r}")
            continue
        if split is not None and split not in SPLITS:
            diagnostics.append(f"line {line_no}: unknown split {split!r}")
            continue
        try:
            verb = _base_verb(lemma)
        except ValueError:
            diagnostics.append(f"line {line_no}: malformed lemma {lemma!r}")
            continue
        cleaned = clean_text(raw)
        index = locate_verb_word(cleaned, verb) if cleaned else None
        if index is None:
            diagnostics.append(
                f"line {line_no}: no word realizes verb {verb!r} in {cleaned!r}"
            )
            continue
        samples.append(
            CorpusSample(
                raw_text=raw,
                clean_text=cleaned,
                lemma=lemma,
                verb_class=verb_class,
                verb_word_index=index,
                split=split,
            )
        )
    return ParsedCorpus(samples=samples, diagnostics=diagnostics)


def split_by_lemma(
    samples: list[CorpusSample],
    train_lemmas: set[str],
    test_lemmas: set[str],
) -> tuple[list[CorpusSample], list[CorpusSample]]:
    """Partition samples by lemma so no lemma ever spans both splits."""
    overlap = sorted(train_lemmas & test_lemmas)
    if overlap:
        raise ValidationError(f"lemmas assigned to both splits: {', '.join(overlap)}")
    train: list[CorpusSample] = []
    test: list[CorpusSample] = []
    for sample in samples:
        if sample.lemma in train_lemmas:
            train.append(replace(sample, split="train"))
        elif sample.lemma in test_lemmas:
            test.append(replace(sample, split="test"))
        else:
            raise ValidationError(f"lemma {sample.lemma!r} not assigned to any split")
    return train, test


@dataclass(frozen=True)
class LemmaEntry:
    lemma: str
    verb_class: str
    split: str
    reference_count: int


def load_lemma_inventory() -> list[LemmaEntry]:
    """The bundled train/test lemma inventory with reference sentence counts."""
    text = (
        resources.files("layersep").joinpath("data/table1_lemmas.txt").read_text("utf-8")
    )
    entries: list[LemmaEntry] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lemma, verb_class, split, count = line.split("\t")
        entries.append(
            LemmaEntry(
                lemma=lemma,
                verb_class=verb_class,
                split=split,
                reference_count=int(count),
            )
        )
    return entries


def default_split_sets() -> tuple[set[str], set[str]]:
    """(train lemmas, test lemmas) from the bundled inventory."""
    inventory = load_lemma_inventory()
    train = {e.lemma for e in inventory if e.split == "train"}
    test = {e.lemma for e in inventory if e.split == "test"}
    return train, test
