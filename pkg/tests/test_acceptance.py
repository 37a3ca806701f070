"""
验收脚本的小规模冒烟测试
"""
import pytest

from core.corpus import build_corpus
from scripts.run_acceptance import (
    D3_CASES,
    D4_CASES,
    check_automorphisms,
    check_classification,
    check_elliptic,
    check_oracle,
    check_round_trip,
    check_special_counts,
    check_t_locus,
    check_tangents,
)


@pytest.fixture(scope="module")
def small_corpus():
    return build_corpus(11, 3, 3, max_degree=5)


@pytest.fixture(scope="module")
def full_range_corpus():
    """次数覆盖 3..8 的语料，前 60 个正例里有 d=8 的曲线"""
    return build_corpus(7, 60, 60)


def test_classification_stages():
    assert check_classification(D3_CASES)["failures"] == []
    assert check_classification(D4_CASES)["failures"] == []


def test_oracle_agreement(small_corpus):
    assert check_oracle(small_corpus, 12, 11)["disagreements"] == []


def test_round_trip():
    assert check_round_trip(6, 11)["failures"] == 0


def test_special_counts(small_corpus):
    assert check_special_counts(small_corpus)["positive_failures"] == []


def test_elliptic_bridge():
    assert check_elliptic(6, 11)["failures"] == []


def test_automorphisms(small_corpus):
    assert check_automorphisms(small_corpus)["failures"] == []


def test_full_range_corpus_reaches_degree_eight(full_range_corpus):
    assert any(item.d == 8 for item in full_range_corpus if item.positive)
    assert any(item.d == 8 for item in full_range_corpus if not item.positive)


def test_tangent_concurrency(full_range_corpus):
    result = check_tangents(full_range_corpus, 7)
    assert result["positive_failures"] == []
    assert result["negative_failures"] == []


def test_t_locus_on_positives(full_range_corpus):
    assert check_t_locus(full_range_corpus, 7)["failures"] == []
