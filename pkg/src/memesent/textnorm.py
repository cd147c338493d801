"""Rule-based normalization of meme descriptions.

The pipeline runs, in order: username replacement, hashtag splitting, URL
stripping, markup/glyph stripping, lowercasing, whitespace tokenization,
contraction expansion, and elongation collapsing. Digits survive only when
they entered through hashtag splitting (or a contraction expansion); raw
digits in the source text are stripped.
"""

from __future__ import annotations

import re
from importlib import resources

# Fixed TLD list for bare-domain URL detection; deterministic, no network.
_TLDS = (
    "com net org edu gov mil int io co uk us ca au nz de fr it es nl se no fi "
    "dk pl ru jp cn in br mx ch at be cz gr pt ie tv me info biz xyz online "
    "site tech app dev blog store news ly gg"
).split()

_SCHEME_URL = r"[a-z][a-z0-9+.-]*://\S+"
_WWW_URL = r"www\.\S+"
_BARE_URL = r"(?:[a-z0-9][a-z0-9-]*\.)+(?:%s)(?:/\S*)?(?!\w|\.\w)" % "|".join(_TLDS)
# A URL together with the whitespace run before it collapses to one space.
_URL_RE = re.compile(r"\s*(?:%s|%s|%s)" % (_SCHEME_URL, _WWW_URL, _BARE_URL), re.IGNORECASE)

_TAG_RE = re.compile(r"</?[a-zA-Z][^<>]*>")
_MENTION_RE = re.compile(r"(?<!\S)@\w+")
_HASHTAG_RE = re.compile(r"#(\w+)")
# Maximal runs of characters outside the kept alphabet, plus any whitespace
# immediately before them, become a single space.
_GLYPH_RE = re.compile(r"\s*[^A-Za-z\s]+")
_GLYPH_KEEP_DIGITS_RE = re.compile(r"\s*[^A-Za-z0-9\s]+")

# Elongation runs are letter runs; digit runs (hashtag years) are untouched.
_RUN3_RE = re.compile(r"([A-Za-z])\1{2,}")
_RUN2_RE = re.compile(r"([A-Za-z])\1+")


class ContractionDict:
    """Case-insensitive token-to-phrase mapping (e.g. ``gng -> going``)."""

    def __init__(self, entries):
        self.entries: dict[str, str] = {}
        for key, expansion in entries.items() if isinstance(entries, dict) else entries:
            key = key.lower()
            if not key or any(ch.isspace() for ch in key):
                raise ValueError(f"bad contraction key: {key!r}")
            if key == expansion.lower().strip():
                raise ValueError(f"contraction maps to itself: {key!r}")
            self.entries[key] = expansion
        if not self.entries:
            raise ValueError("contraction dictionary is empty")

    def __len__(self):
        return len(self.entries)

    def __contains__(self, token):
        return token.lower() in self.entries

    def expand(self, token: str) -> list[str]:
        phrase = self.entries.get(token.lower())
        return phrase.split() if phrase is not None else [token]

    @classmethod
    def from_file(cls, path) -> "ContractionDict":
        """One ``key<TAB>expansion`` per line; ``#``-prefixed lines ignored."""
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, expansion = line.partition("\t")
                pairs.append((key.strip(), expansion.strip()))
        return cls(pairs)

    @classmethod
    def bundled(cls) -> "ContractionDict":
        ref = resources.files("memesent").joinpath("assets/contractions.tsv")
        with resources.as_file(ref) as path:
            return cls.from_file(path)


def strip_urls(text: str) -> str:
    """Remove scheme-prefixed, www-prefixed, and bare known-TLD URLs."""
    return _URL_RE.sub(" ", text)


def strip_markup_and_glyphs(text: str, keep_digits: bool = False) -> str:
    """Drop tag-like markup, then punctuation, digits, and non-ASCII glyphs."""
    text = _TAG_RE.sub(" ", text)
    pattern = _GLYPH_KEEP_DIGITS_RE if keep_digits else _GLYPH_RE
    return pattern.sub(" ", text)


def replace_usernames(text: str) -> str:
    return _MENTION_RE.sub("USER", text)


def _split_tag_body(body: str) -> str:
    """Split at digit-run boundaries and lowercase-to-uppercase transitions."""
    out = [body[0]] if body else []
    for prev, ch in zip(body, body[1:]):
        if prev.isdigit() != ch.isdigit() or (prev.islower() and ch.isupper()):
            out.append(" ")
        out.append(ch)
    return "".join(out)


def split_hashtag(text: str) -> str:
    return _HASHTAG_RE.sub(lambda m: _split_tag_body(m.group(1)), text)


def expand_contractions(tokens: list[str], contractions: ContractionDict) -> list[str]:
    out = []
    for token in tokens:
        out.extend(contractions.expand(token))
    return out


def collapse_elongation(token: str, vocab=None) -> str:
    """Collapse letter elongations ("Nooooo" -> "No"), leaving plain words alone.

    Tokens without a run of three identical letters pass through unchanged, so
    ordinary doubles ("good") survive even with no vocabulary. Elongated tokens
    try the runs-to-two form first, then the fully collapsed runs-to-one form;
    the first form found in ``vocab`` wins, else the fully collapsed form.
    """
    if not _RUN3_RE.search(token):
        return token
    two = _RUN3_RE.sub(lambda m: m.group(1) * 2, token)
    one = _RUN2_RE.sub(lambda m: m.group(1), token)
    if vocab is not None:
        if two.lower() in vocab:
            return two
        if one.lower() in vocab:
            return one
    return one


def normalize(text: str, contractions: ContractionDict, vocab=None) -> list[str]:
    """Full pipeline from raw description to lowercase token list.

    Hashtag-derived digit runs are protected from the digit-stripping stage
    (the split "#10YearChallenge" must keep its "10"); every other digit in
    the source text is removed.
    """
    text = replace_usernames(text)

    # Segment so digit-stripping can skip hashtag expansions.
    segments: list[tuple[str, bool]] = []
    cursor = 0
    for match in _HASHTAG_RE.finditer(text):
        if match.start() > cursor:
            segments.append((text[cursor : match.start()], False))
        segments.append((_split_tag_body(match.group(1)), True))
        cursor = match.end()
    if cursor < len(text):
        segments.append((text[cursor:], False))

    cleaned = []
    for segment, from_hashtag in segments:
        if not from_hashtag:
            segment = strip_urls(segment)
        cleaned.append(strip_markup_and_glyphs(segment, keep_digits=from_hashtag))

    tokens = " ".join(cleaned).lower().split()
    tokens = expand_contractions(tokens, contractions)
    return [collapse_elongation(t, vocab) for t in tokens]
