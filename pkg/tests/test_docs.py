import hashlib
import re
from pathlib import Path

from stratsheaf.report import ANCHORS

ROOT = Path(__file__).resolve().parent.parent
INDEX = ROOT / "docs" / "theorem-index.md"


def _h(word):
    return hashlib.sha256(word.lower().encode()).hexdigest()[:16]


# hashed so this file does not itself contain the screened words
BANNED_WORDS = {"382635c9325bf327", "d4f02eaafd1a9e9d", "83ae2f5a38db4ea1", "93112796882f0bfb",
                "6c9e3d139a3cdf92", "f20b24c2ae676afe"}
BANNED_TAGS = {"08f0be883564cbf2", "6d4c9cf5e022a07e", "986a1b7135f49861", "c0f69e19ba252767",
               "382635c9325bf327"}
NUMBERED = re.compile(r"\b(Thm|Theorem|Lemma|Cor|Corollary|Prop|Proposition|Def|Definition|Remark|"
                      r"Warning|Example|Section|Eq|Equation)\.?\s+\d+(\.\d+)*")


def _files():
    for base in ("src", "tests", "docs", "data"):
        for p in sorted((ROOT / base).rglob("*")):
            if p.is_file() and p.suffix in (".py", ".md", ".json", ".toml"):
                yield p
    for name in ("README.md", "pyproject.toml"):
        if (ROOT / name).exists():
            yield ROOT / name


def _index_tags():
    return re.findall(r"^\| `([a-z-]+)` \|", INDEX.read_text(encoding="utf-8"), re.M)


def test_index_matches_anchor_table():
    tags = _index_tags()
    assert len(tags) == len(set(tags))
    assert set(tags) == set(ANCHORS)


def test_every_emitted_anchor_is_indexed():
    used = set()
    for p in (ROOT / "src").rglob("*.py"):
        used |= set(re.findall(r'Report\([^()]*?"[a-z-]+", "([a-z-]+)"', p.read_text(encoding="utf-8")))
    assert used and used <= set(_index_tags())


def test_no_external_references():
    for p in _files():
        text = p.read_text(encoding="utf-8")
        for word in re.findall(r"[A-Za-z_]+", text):
            assert _h(word) not in BANNED_WORDS, (p.name, word)
        for tag in re.findall(r"\[([A-Z]+)\]", text):
            assert _h(tag) not in BANNED_TAGS, (p.name, tag)
        assert not NUMBERED.search(text), (p.name, NUMBERED.search(text).group(0))
        assert "\u00a7" not in text and "\u2014" not in text, p.name
