import random

import numpy as np
import pytest

import corpex
from corpex.errors import (
    BadMagicError,
    EmptyCorpusError,
    IndexFormatError,
    TruncatedFileError,
    VersionMismatchError,
)
from corpex.index import build_index, count_node, load_index, save_index, whole_scope

import oracles
from conftest import parse_text
from corpusgen import random_vertical


def tiny_docs():
    return parse_text('<doc id="d1">\na\ta\tX\nb\tb\tX\na\ta\tX\n</doc>\n')


class TestBuild:
    def test_postings_from_three_tokens(self):
        ix = build_index(iter(tiny_docs()))
        assert ix.token_count == 3
        assert ix.doc_count == 1
        assert set(ix.lemmas) == {"a", "b"}
        a, b = ix.lemma_id("a"), ix.lemma_id("b")
        assert ix.positions_of(a).tolist() == [0, 2]
        assert ix.positions_of(b).tolist() == [1]

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpusError):
            build_index(iter([]))

    def test_empty_documents_dropped(self):
        docs = parse_text('<doc id="e">\n</doc>\n<doc id="d">\nx\tx\tX\n</doc>\n')
        ix = build_index(iter(docs))
        assert [d.doc_id for d in ix.doc_table] == ["d"]

    def test_lexicon_matches_brute_force(self, fixture_docs, fixture_index):
        f, _ = oracles.lemma_counts(fixture_docs)
        assert set(fixture_index.lemmas) == set(f)
        assert fixture_index.vocab_size == len(f)

    def test_lemmas_lowercased_at_index_time(self, fixture_index):
        assert all(lemma == lemma.lower() for lemma in fixture_index.lemmas)

    def test_worker_counts_give_identical_files(self, tmp_path, fixture_docs):
        paths = []
        for workers in (1, 2, 8):
            ix = build_index(iter(fixture_docs), workers=workers, seed_order=workers)
            p = tmp_path / f"w{workers}.idx"
            save_index(ix, p)
            paths.append(p.read_bytes())
        assert paths[0] == paths[1] == paths[2]

    def test_token_count_partitions(self, fixture_index):
        assert fixture_index.token_count == sum(d.token_count for d in fixture_index.doc_table)


class TestPersistence:
    def test_roundtrip_structural_equality(self, tmp_path, fixture_index):
        p = tmp_path / "x.idx"
        save_index(fixture_index, p)
        back = load_index(p)
        assert back.lemmas == fixture_index.lemmas
        assert np.array_equal(back.token_lemma_ids, fixture_index.token_lemma_ids)
        assert np.array_equal(back.pos_ids, fixture_index.pos_ids)
        assert np.array_equal(back.sent_starts, fixture_index.sent_starts)
        assert [d.doc_id for d in back.doc_table] == [d.doc_id for d in fixture_index.doc_table]
        assert [d.sent_starts for d in back.doc_table] == [
            d.sent_starts for d in fixture_index.doc_table
        ]
        assert back.upper_positions.keys() == fixture_index.upper_positions.keys()
        for key in back.upper_positions:
            assert np.array_equal(back.upper_positions[key], fixture_index.upper_positions[key])

    def test_roundtrip_preserves_query_answers(self, tmp_path, fixture_docs, fixture_index):
        p = tmp_path / "x.idx"
        save_index(fixture_index, p)
        back = load_index(p)
        scope_a, scope_b = whole_scope(fixture_index), whole_scope(back)
        for lemma in fixture_index.lemmas:
            node = corpex.make_node(lemma, "lemma")
            ha, hb = count_node(scope_a, node), count_node(scope_b, node)
            assert (ha.f, ha.docf) == (hb.f, hb.docf)
            assert np.array_equal(ha.positions, hb.positions)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "bad.idx"
        p.write_bytes(b"NOTANIDX" + b"\x00" * 40)
        with pytest.raises(BadMagicError):
            load_index(p)

    def test_version_mismatch(self, tmp_path, fixture_index):
        p = tmp_path / "x.idx"
        save_index(fixture_index, p)
        data = bytearray(p.read_bytes())
        data[8:12] = (99).to_bytes(4, "little")
        p.write_bytes(bytes(data))
        with pytest.raises(VersionMismatchError):
            load_index(p)

    def test_trailing_garbage_rejected(self, tmp_path, fixture_index):
        p = tmp_path / "x.idx"
        save_index(fixture_index, p)
        p.write_bytes(p.read_bytes() + b"junk")
        with pytest.raises(IndexFormatError):
            load_index(p)

    def test_mutation_fuzz_never_crashes(self, tmp_path, fixture_index):
        # random byte corruption must surface as a format error, never as
        # an unhandled OverflowError/ValueError from the decoders
        import random

        from corpex.errors import CorpexError

        p = tmp_path / "x.idx"
        save_index(fixture_index, p)
        blob = bytearray(p.read_bytes())
        rng = random.Random(123)
        for _ in range(1500):
            mutated = bytearray(blob)
            for _ in range(rng.randint(1, 6)):
                mutated[rng.randrange(len(mutated))] = rng.randrange(256)
            p.write_bytes(bytes(mutated))
            try:
                load_index(p)
            except (CorpexError, UnicodeDecodeError):
                pass

    def test_truncation_fuzz_every_offset(self, tmp_path):
        # small corpus so the fuzz loop stays fast
        docs = parse_text(
            '<doc id="d1">\n<s>\nVR\tvr\tPROPN\nrocks\trock\tVERB\n</s>\n</doc>\n'
            '<doc id="d2">\ncalm\tcalm\tADJ\nmind\tmind\tNOUN\n</doc>\n'
        )
        ix = build_index(iter(docs))
        p = tmp_path / "small.idx"
        save_index(ix, p)
        blob = p.read_bytes()
        cut = tmp_path / "cut.idx"
        for end in range(len(blob)):
            cut.write_bytes(blob[:end])
            with pytest.raises(TruncatedFileError):
                load_index(cut)


class TestCountNode:
    def test_lemma_counts_match_scan(self, fixture_docs, fixture_index):
        scope = whole_scope(fixture_index)
        f_oracle, docf_oracle = oracles.lemma_counts(fixture_docs)
        for lemma in fixture_index.lemmas:
            hits = count_node(scope, corpex.make_node(lemma, "lemma"))
            assert hits.f == f_oracle[lemma], lemma
            assert hits.docf == docf_oracle[lemma], lemma

    def test_bigram_adjacency_definition(self):
        docs = parse_text(
            '<doc id="d">\nvirtual\tvirtual\tADJ\nreality\treality\tNOUN\n'
            'virtual\tvirtual\tADJ\nx\tx\tX\nreality\treality\tNOUN\n</doc>\n'
        )
        ix = build_index(iter(docs))
        hits = count_node(whole_scope(ix), corpex.make_node("virtual reality", "bigram"))
        assert hits.f == 1
        assert hits.positions.tolist() == [0]

    def test_bigram_does_not_cross_sentences(self):
        docs = parse_text(
            '<doc id="d">\n<s>\nvirtual\tvirtual\tADJ\n</s>\n<s>\nreality\treality\tNOUN\n</s>\n</doc>\n'
        )
        ix = build_index(iter(docs))
        assert count_node(whole_scope(ix), corpex.make_node("virtual reality", "bigram")).f == 0

    def test_initialism_case_sensitivity(self):
        docs = parse_text(
            '<doc id="d">\nVR\tvr\tPROPN\nvr\tvr\tNOUN\nVr\tvr\tNOUN\n</doc>\n'
        )
        ix = build_index(iter(docs))
        hits = count_node(whole_scope(ix), corpex.make_node("VR", "initialism"))
        assert hits.f == 1
        assert hits.positions.tolist() == [0]

    def test_absent_node_is_zero(self, fixture_index):
        hits = count_node(whole_scope(fixture_index), corpex.make_node("unicorn", "lemma"))
        assert (hits.f, hits.docf, len(hits.positions)) == (0, 0, 0)

    def test_randomized_scan_equivalence(self):
        rng = random.Random(4321)
        for round_no in range(10):
            docs = parse_text(random_vertical(rng, max_tokens=400))
            if not any(tokens for _, tokens in docs):
                continue
            ix = build_index(iter(docs))
            scope = whole_scope(ix)
            for node in [
                corpex.make_node("vr", "lemma"),
                corpex.make_node("VR", "initialism"),
                corpex.make_node("virtual reality", "bigram"),
                corpex.make_node("w1", "lemma"),
            ]:
                expected = oracles.node_positions(docs, node)
                hits = count_node(scope, node)
                assert hits.positions.tolist() == expected, (round_no, node)
                assert hits.docf == oracles.node_docf(docs, node)
