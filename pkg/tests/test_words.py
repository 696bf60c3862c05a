from __future__ import annotations

import itertools

import pytest

from cycleint.words import (
    EvenWord, L, Mat2Z, S, T, WordError, concat, continuant_matrix, gamma_of_word, ladder,
    ladder_matrix, multiplicity, power, primitive_decomposition, rotate,
)

from conftest import even_words


def naive_gamma(word):
    m = Mat2Z.identity()
    for k in word:
        m = m @ Mat2Z(k, 1, 1, 0)
    return m


class TestEvenWord:
    def test_rejects_odd_length(self):
        with pytest.raises(WordError, match="odd length"):
            EvenWord((1, 2, 3))

    @pytest.mark.parametrize("bad", [(0, 1), (-1, 2), (1.0, 2), (True, 1)])
    def test_rejects_bad_entries(self, bad):
        with pytest.raises(WordError):
            EvenWord(bad)

    def test_empty_is_identity(self):
        w = EvenWord((1, 2))
        assert EvenWord() + w == w == w + EvenWord()
        assert gamma_of_word(()) == Mat2Z.identity()

    def test_parse_and_str(self):
        assert EvenWord.parse(" (1, 2 ,3,4) ") == (1, 2, 3, 4)
        assert str(EvenWord((1, 2))) == "(1,2)"
        assert EvenWord.parse("()") == ()
        with pytest.raises(WordError):
            EvenWord.parse("(1,x)")
        with pytest.raises(WordError):
            EvenWord.parse("(1,2,3)")

    def test_power_and_concat(self):
        assert power((1, 2), 3) == (1, 2) * 3
        assert power((1, 2), 0) == ()
        assert concat([(1, 1), (), (2, 3)]) == (1, 1, 2, 3)
        with pytest.raises(WordError):
            power((1, 2), -1)


class TestMatrices:
    def test_generators(self):
        assert T == Mat2Z(1, 1, 0, 1)
        assert L == S @ T.inverse() @ S.inverse()
        assert S @ S == -Mat2Z.identity()

    def test_inverse_and_power(self):
        g = gamma_of_word((1, 2, 3, 4))
        assert g @ g.inverse() == Mat2Z.identity()
        assert g ** -2 == (g.inverse()) @ (g.inverse())
        assert g ** 0 == Mat2Z.identity()

    def test_examples(self):
        assert gamma_of_word((1, 1)) == Mat2Z(2, 1, 1, 1)
        assert gamma_of_word((2, 2)) == Mat2Z(5, 2, 2, 1)
        assert str(gamma_of_word((1, 1))) == "[[2,1],[1,1]]"

    @pytest.mark.parametrize("word", list(even_words(3, 4)))
    def test_continuant_matches_product_and_det(self, word):
        g = gamma_of_word(word)
        assert g == naive_gamma(word)
        assert g.det == 1
        assert g.a >= g.b >= 0 and g.a >= g.c >= 0

    def test_odd_continuant_has_det_minus_one(self):
        assert continuant_matrix((2, 3, 4)).det == -1

    def test_big_entries_stay_exact(self):
        g = gamma_of_word((1, 1) * 200)
        # Fibonacci numbers: gamma_(1,1)^n = [[F(2n+1), F(2n)], [F(2n), F(2n-1)]]
        a, b = 0, 1
        for _ in range(401):
            a, b = b, a + b
        assert g.a == a and g.det == 1


class TestHomomorphism:
    def test_exhaustive_concatenation(self):
        words = list(even_words(3, 4))
        for a, b in itertools.product(words, repeat=2):
            assert gamma_of_word(a + b) == gamma_of_word(a) @ gamma_of_word(b)


class TestMultiplicity:
    @pytest.mark.parametrize("word, root, n", [
        ((1, 2, 1, 2), (1, 2), 2),
        ((1, 1), (1, 1), 1),
        ((1, 1, 1, 1, 1, 1), (1, 1), 3),
        ((1, 2, 2, 1), (1, 2, 2, 1), 1),
        ((3, 3, 3, 3), (3, 3), 2),
    ])
    def test_examples(self, word, root, n):
        assert primitive_decomposition(word) == (root, n)

    @pytest.mark.parametrize("word", list(even_words(2, 6)))
    def test_brute_force(self, word):
        # oracle: count the even-length shifts that fix the word cyclically
        shifts = [d for d in range(2, len(word) + 1, 2)
                  if len(word) % d == 0 and word == word[d:] + word[:d]]
        assert multiplicity(word) == len(word) // shifts[0]

    def test_empty_rejected(self):
        with pytest.raises(WordError):
            primitive_decomposition(())


class TestRotateAndLadder:
    def test_rotate(self):
        assert rotate(["a", "b", "c"], 2) == ["b", "c", "a"]
        assert rotate(["a"], 1) == ["a"]
        with pytest.raises(IndexError):
            rotate(["a", "b"], 3)

    @pytest.mark.parametrize("word", list(even_words(3, 4)))
    def test_ladder_product(self, word):
        blocks = ladder(word)
        assert ladder_matrix(blocks) == gamma_of_word(word)
        assert ladder_matrix(ladder(word, inverse=True)) == gamma_of_word(word).inverse()

    def test_ladder_allows_signed_entries(self):
        entries = (-1, 2, 0, 3)
        assert ladder_matrix(ladder(entries)) == continuant_matrix(entries)
