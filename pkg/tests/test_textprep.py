import string

import pytest
from hypothesis import given, strategies as st

from layersep.errors import ValidationError
from layersep.textprep import (
    PUNCTUATION,
    clean_text,
    default_split_sets,
    load_lemma_inventory,
    locate_verb_word,
    match_verb_word,
    parse_corpus,
    split_by_lemma,
)


# --- cleaning ---------------------------------------------------------------

def test_clean_removes_punctuation_and_lowercases():
    assert clean_text("Turn off the light!") == "turn off the light"


def test_clean_trims_and_collapses_whitespace():
    assert clean_text("  Look   at -- the painting.  ") == "look at the painting"


def test_clean_empty_string():
    assert clean_text("") == ""


def test_punctuation_set_is_the_full_ascii_set():
    assert PUNCTUATION == string.punctuation


@given(st.text(max_size=80))
def test_clean_is_idempotent(text):
    once = clean_text(text)
    assert clean_text(once) == once


@given(st.text(max_size=80))
def test_clean_output_has_no_punctuation_or_double_spaces(text):
    out = clean_text(text)
    assert not set(out) & set(PUNCTUATION)
    assert "  " not in out
    assert out == out.strip()
    assert out == out.lower()


# --- verb matching ----------------------------------------------------------

@pytest.mark.parametrize(
    "word,verb",
    [
        ("give", "give"),
        ("gives", "give"),
        ("giving", "give"),  # e-drop
        ("gave", "give"),  # irregular
        ("given", "give"),  # irregular
        ("looked", "look"),
        ("looking", "look"),
        ("carries", "carry"),  # y -> i
        ("carried", "carry"),
        ("putting", "put"),  # consonant doubling
        ("stopped", "stop"),
        ("took", "take"),
        ("woke", "wake"),
        ("went", "go"),
        ("goes", "go"),
        ("did", "do"),
        ("dealt", "deal"),
        ("broke", "break"),
        ("brought", "bring"),
        ("led", "lead"),
        ("held", "hold"),
        ("found", "find"),
        ("threw", "throw"),
        ("came", "come"),
        ("coming", "come"),
    ],
)
def test_inflections_match_their_base_verb(word, verb):
    assert match_verb_word(word, verb)


@pytest.mark.parametrize(
    "word,verb",
    [
        ("gift", "give"),
        ("looks", "look_up"),  # lemmas are not verbs
        ("glook", "look"),
        ("lo", "look"),
        ("takeover", "take"),  # bare concatenation is not an inflection
        ("winged", "win"),
    ],
)
def test_non_inflections_do_not_match(word, verb):
    assert not match_verb_word(word, verb)


def test_locate_picks_the_earliest_match():
    assert locate_verb_word("she gave it up", "give") == 1
    assert locate_verb_word("look at it", "look") == 0
    assert locate_verb_word("give and give again", "give") == 0
    assert locate_verb_word("nothing here", "give") is None


# --- corpus parsing -----------------------------------------------------------

def write_corpus(tmp_path, lines):
    path = tmp_path / "corpus.tsv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_parse_extracts_verb_index(tmp_path):
    path = write_corpus(tmp_path, ["She gave it up\tgive_up\tphrasal"])
    parsed = parse_corpus(path)
    assert parsed.skipped == 0
    sample = parsed.samples[0]
    assert sample.clean_text == "she gave it up"
    assert sample.verb_word_index == 1
    assert sample.verb_class == "phrasal"
    assert sample.split is None


def test_parse_sentence_initial_verb(tmp_path):
    path = write_corpus(tmp_path, ["Look at it\tlook_at\tprepositional"])
    parsed = parse_corpus(path)
    assert parsed.samples[0].verb_word_index == 0


def test_parse_reads_optional_split_column(tmp_path):
    path = write_corpus(tmp_path, ["She gave it up\tgive_up\tphrasal\ttrain"])
    assert parse_corpus(path).samples[0].split == "train"


@pytest.mark.parametrize(
    "line,fragment",
    [
        ("She gave it up\tgive_up\tverbal", "unknown class"),
        ("She gave it up\tgiveup\tphrasal", "malformed lemma"),
        ("She sold it\tgive_up\tphrasal", "no word realizes"),
        ("She gave it up\tgive_up", "3 or 4 tab-separated"),
        ("She gave it up\tgive_up\tphrasal\tdev", "unknown split"),
    ],
)
def test_bad_rows_are_skipped_with_line_numbers(tmp_path, line, fragment):
    path = write_corpus(tmp_path, ["Look at it\tlook_at\tprepositional", line])
    parsed = parse_corpus(path)
    assert len(parsed.samples) == 1
    assert parsed.skipped == 1
    assert parsed.diagnostics[0].startswith("line 2:")
    assert fragment in parsed.diagnostics[0]


def test_blank_lines_are_ignored(tmp_path):
    path = write_corpus(tmp_path, ["", "Look at it\tlook_at\tprepositional", ""])
    parsed = parse_corpus(path)
    assert len(parsed.samples) == 1
    assert parsed.skipped == 0


# --- splitting ------------------------------------------------------------------

def corpus_samples(tmp_path, rows):
    return parse_corpus(write_corpus(tmp_path, rows)).samples


def test_split_partitions_and_stamps_splits(tmp_path):
    samples = corpus_samples(
        tmp_path,
        [
            "She gave it up\tgive_up\tphrasal",
            "Look at it\tlook_at\tprepositional",
            "He took it up\ttake_up\tphrasal",
        ],
    )
    train, test = split_by_lemma(samples, {"give_up", "look_at"}, {"take_up"})
    assert [s.lemma for s in train] == ["give_up", "look_at"]
    assert [s.lemma for s in test] == ["take_up"]
    assert all(s.split == "train" for s in train)
    assert all(s.split == "test" for s in test)
    assert len(train) + len(test) == len(samples)


def test_split_overlap_is_an_error(tmp_path):
    samples = corpus_samples(tmp_path, ["He took it up\ttake_up\tphrasal"])
    with pytest.raises(ValidationError, match="take_up"):
        split_by_lemma(samples, {"take_up"}, {"take_up"})


def test_split_unassigned_lemma_is_an_error(tmp_path):
    samples = corpus_samples(tmp_path, ["He took it up\ttake_up\tphrasal"])
    with pytest.raises(ValidationError, match="take_up"):
        split_by_lemma(samples, {"give_up"}, {"look_at"})


def test_split_all_samples_on_one_test_lemma(tmp_path):
    samples = corpus_samples(
        tmp_path,
        ["He took it up\ttake_up\tphrasal", "Take it up\ttake_up\tphrasal"],
    )
    train, test = split_by_lemma(samples, {"give_up"}, {"take_up"})
    assert train == []
    assert len(test) == 2


# --- bundled inventory ------------------------------------------------------------

def test_inventory_shape():
    inventory = load_lemma_inventory()
    assert len(inventory) == 42
    by_group = {}
    for entry in inventory:
        by_group.setdefault((entry.split, entry.verb_class), []).append(entry)
    assert len(by_group[("train", "phrasal")]) == 19
    assert len(by_group[("train", "prepositional")]) == 14
    assert len(by_group[("test", "phrasal")]) == 4
    assert len(by_group[("test", "prepositional")]) == 5


def test_inventory_reference_counts_sum_to_published_totals():
    inventory = load_lemma_inventory()
    totals = {}
    for entry in inventory:
        key = (entry.split, entry.verb_class)
        totals[key] = totals.get(key, 0) + entry.reference_count
    assert totals[("train", "phrasal")] == 1920
    assert totals[("train", "prepositional")] == 2070
    assert totals[("test", "phrasal")] == 522
    assert totals[("test", "prepositional")] == 623
    assert sum(totals.values()) == 5135


def test_inventory_split_sizes_flow_through_split_by_lemma(tmp_path):
    # One synthetic sentence per reference count, dispatched through the real
    # splitter, must reproduce the published partition sizes.
    inventory = load_lemma_inventory()
    rows = []
    for entry in inventory:
        verb, particle = entry.lemma.split("_", 1)
        rows.extend(
            f"They {verb} it {particle}\t{entry.lemma}\t{entry.verb_class}"
            for _ in range(entry.reference_count)
        )
    samples = corpus_samples(tmp_path, rows)
    assert len(samples) == 5135
    train, test = split_by_lemma(samples, *default_split_sets())
    assert len(train) == 1920 + 2070
    assert len(test) == 522 + 623
    assert sum(s.verb_class == "phrasal" for s in train) == 1920
    assert sum(s.verb_class == "prepositional" for s in train) == 2070
    assert sum(s.verb_class == "phrasal" for s in test) == 522
    assert sum(s.verb_class == "prepositional" for s in test) == 623


def test_every_inventory_verb_is_locatable():
    # Guards the irregular-forms table: each base verb must match itself and
    # its common third-person form.
    for entry in load_lemma_inventory():
        verb = entry.lemma.split("_")[0]
        assert match_verb_word(verb, verb)
        third = verb + ("es" if verb.endswith(("o", "s", "x", "ch", "sh")) else "s")
        assert match_verb_word(third, verb), (third, verb)
