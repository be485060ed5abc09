"""Brute-force reference implementations used to check the real pipeline.

These work on plain lists of already-normalized tokens per sentence and
share no code with the package.
"""

from __future__ import annotations

import random


def occurrences(sentence, phrase):
    n = len(phrase)
    return [i for i in range(len(sentence) - n + 1) if tuple(sentence[i:i + n]) == tuple(phrase)]


def all_intervals(sentence, names, headword):
    """Every (start, end, name) with sentence[start:end] equal to a name."""
    found = []
    for start in range(len(sentence)):
        for end in range(start + 1, len(sentence) + 1):
            piece = tuple(sentence[start:end])
            if piece in names and piece != tuple(headword):
                found.append((start, end, piece))
    return found


def longest_leftmost(intervals):
    """Keep an interval unless a longer one, or an equally long one further
    left, that was itself kept overlaps it."""
    kept = []
    for start, end, name in sorted(intervals, key=lambda iv: (-(iv[1] - iv[0]), iv[0])):
        if all(end <= s or start >= e for s, e, _ in kept):
            kept.append((start, end, name))
    return sorted(kept)


def oracle_matches(sentences, headword, names):
    """``names`` maps a token tuple to its meaning.

    Returns ``[(global_position, name_tuple, meaning)]`` over sentences that
    contain the headword.
    """
    out = []
    offset = 0
    for sentence in sentences:
        if occurrences(sentence, headword):
            for start, _end, name in longest_leftmost(all_intervals(sentence, names, headword)):
                out.append((offset + start, name, names[name]))
        offset += len(sentence)
    return sorted(out)


def oracle_resolve(sentences, kb):
    """``kb`` maps headword tuple -> (sense meanings in order, {name tuple: meaning}).

    Returns ``(headword_tuple or None, meaning or None)``.
    """
    counts = {}
    for hw in kb:
        # headwords never straddle a sentence boundary
        positions = []
        offset = 0
        for s in sentences:
            positions += [offset + i for i in occurrences(s, hw)]
            offset += len(s)
        if positions:
            counts[hw] = (len(positions), positions[0])
    if not counts:
        return None, None
    best = max(c for c, _ in counts.values())
    tied = [hw for hw, (c, _) in counts.items() if c == best]
    target = min(tied, key=lambda hw: counts[hw][1])
    order, names = kb[target]
    votes, first = {}, {}
    for pos, _name, meaning in oracle_matches(sentences, target, names):
        votes[meaning] = votes.get(meaning, 0) + 1
        first.setdefault(meaning, pos)
    if not votes:
        return target, None
    top = max(votes.values())
    leaders = [m for m in votes if votes[m] == top]
    leaders.sort(key=lambda m: (first[m], order.index(m)))
    return target, leaders[0]


VOCAB = ["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"]
HEADWORDS = [("hx",), ("hy",), ("hz",)]


def random_instance(rng: random.Random, max_tokens=30, max_senses=3, max_names=5):
    """A small random knowledge base plus a document, as plain token lists."""
    kb = {}
    for hw in rng.sample(HEADWORDS, rng.randint(1, len(HEADWORDS))):
        n_senses = rng.randint(2, max_senses)
        meanings = [f"{hw[0]}-m{i}" for i in range(n_senses)]
        names = {}
        for meaning in meanings:
            for _ in range(rng.randint(1, max_names)):
                length = rng.choice([1, 1, 1, 2, 2, 3])
                pool = VOCAB + [hw[0]]
                name = tuple(rng.choice(pool) for _ in range(length))
                if name == hw or name in names:
                    continue
                names[name] = meaning
        # every sense needs at least one name
        for meaning in meanings:
            if meaning not in names.values():
                while True:
                    name = (rng.choice(VOCAB), f"n{meaning[-1]}{hw[0]}")
                    if name not in names:
                        names[name] = meaning
                        break
        kb[hw] = (meanings, names)

    pool = VOCAB * 2 + [hw[0] for hw in HEADWORDS]
    n_tokens = rng.randint(0, max_tokens)
    sentences, current = [], []
    for _ in range(n_tokens):
        current.append(rng.choice(pool))
        if rng.random() < 0.15:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences, kb


def as_text(sentences):
    return " ".join(" ".join(s) + "." for s in sentences)
