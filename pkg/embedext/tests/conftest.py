import json

import pytest

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "she", "he", "they", "it", "the", "a", "and", "then", "to",
    "gave", "give", "take", "look", "deal", "turn",
    "##s", "##ed", "##ing", "##n",
    "up", "at", "with", "off", "on",
    "light", "window", "painting", "problem", "quickly", "slowly",
]

CORPUS_ROWS = [
    ("She gave it up", "give_up", "phrasal", "train"),
    ("They gave it up quickly", "give_up", "phrasal", "train"),
    ("She looks at the painting", "look_at", "prepositional", "train"),
    ("He looks at the window slowly", "look_at", "prepositional", "train"),
    ("He takes it up", "take_up", "phrasal", "test"),
    ("They take it up quickly", "take_up", "phrasal", "test"),
    ("He deals with it", "deal_with", "prepositional", "test"),
    ("She deals with the problem", "deal_with", "prepositional", "test"),
]


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory):
    """A tiny randomly-initialized encoder saved locally: 2 transformer
    layers (3 hidden-state layers with the embedding layer), width 32."""
    import torch
    from transformers import BertConfig, BertModel

    d = tmp_path_factory.mktemp("model")
    (d / "vocab.txt").write_text("\n".join(VOCAB) + "\n")
    (d / "tokenizer_config.json").write_text(
        json.dumps({"tokenizer_class": "BertTokenizer", "do_lower_case": True})
    )
    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=64,
        max_position_embeddings=48,
        type_vocab_size=2,
    )
    BertModel(config).save_pretrained(d)
    return str(d)


@pytest.fixture(scope="session")
def loaded_model(model_dir):
    import torch
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_dir)
    model = AutoModel.from_pretrained(model_dir)
    model.eval()
    return tokenizer, model, torch


def write_corpus(path, rows=CORPUS_ROWS):
    path.write_text("".join("\t".join(row) + "\n" for row in rows))
    return path


@pytest.fixture(scope="session")
def corpus_file(tmp_path_factory):
    return write_corpus(tmp_path_factory.mktemp("corpus") / "corpus.tsv")
