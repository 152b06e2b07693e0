"""Class vocabularies for human-object interaction labels and their prompt sentences.

A class list is a UTF-8 text file with one ``verb object`` pair per line,
e.g. ``ride bicycle`` or ``hop_on bicycle``. Each class is compiled into a
natural-language sentence ("a person riding a bicycle") suitable for a text
encoder. Class order in the file defines the column order used by every
label matrix, embedding set and classifier weight matrix downstream.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass

from .errors import ConfigError

VOWELS = "aeiou"

# Special verb for images where a person and an object co-occur without
# interacting; it gets its own prompt template instead of a gerund.
NO_INTERACTION = "no_interaction"


@dataclass(frozen=True)
class HoiLabel:
    """One interaction class: a verb, an object and its column index."""

    verb: str
    object: str
    index: int


@dataclass(frozen=True)
class ClassList:
    labels: tuple[HoiLabel, ...]

    @property
    def C(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)


@dataclass(frozen=True)
class Prompt:
    text: str
    source: HoiLabel


def parse_class_list(text: str) -> ClassList:
    """Parse a class-list document into an ordered ClassList.

    Lines must contain exactly two whitespace-separated tokens. Indices are
    assigned in file order. Raises ConfigError on an empty document, a
    malformed line (with its 1-based line number) or a duplicate pair.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ConfigError("class list is empty")

    labels = []
    seen = {}
    for lineno, line in enumerate(lines, start=1):
        tokens = line.split()
        if len(tokens) != 2:
            raise ConfigError(
                f"line {lineno}: expected 'verb object', got {len(tokens)} token(s)"
            )
        verb, obj = tokens
        if (verb, obj) in seen:
            raise ConfigError(
                f"line {lineno}: duplicate class ({verb}, {obj}), "
                f"first seen on line {seen[(verb, obj)]}"
            )
        seen[(verb, obj)] = lineno
        labels.append(HoiLabel(verb=verb, object=obj, index=len(labels)))
    return ClassList(labels=tuple(labels))


def load_gerund_exceptions(text: str | None = None) -> dict[str, str]:
    """Load the irregular-gerund table, ``verb gerund`` per line.

    With no argument, loads the table shipped with the package.
    """
    if text is None:
        text = (
            importlib.resources.files("hoihead")
            .joinpath("data/gerund_exceptions.txt")
            .read_text(encoding="utf-8")
        )
    table = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ConfigError(f"exception table line {lineno}: expected 'verb gerund'")
        table[tokens[0]] = tokens[1]
    return table


_DEFAULT_EXCEPTIONS: dict[str, str] | None = None


def _default_exceptions() -> dict[str, str]:
    global _DEFAULT_EXCEPTIONS
    if _DEFAULT_EXCEPTIONS is None:
        _DEFAULT_EXCEPTIONS = load_gerund_exceptions()
    return _DEFAULT_EXCEPTIONS


def _is_cvc_monosyllable(word: str) -> bool:
    # Consonant-vowel-consonant ending with a single vowel group, the usual
    # trigger for final-consonant doubling (cut -> cutting). Final w/x/y
    # never double.
    if len(word) < 3:
        return False
    a, b, c = word[-3], word[-2], word[-1]
    if not (a not in VOWELS and b in VOWELS and c not in VOWELS):
        return False
    if c in "wxy":
        return False
    groups = 0
    prev_vowel = False
    for ch in word:
        is_vowel = ch in VOWELS
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    return groups == 1


def gerundize(verb: str, exceptions: dict[str, str] | None = None) -> str:
    """Present-participle form of a verb token, e.g. ``ride`` -> ``riding``.

    Multiword tokens split on underscores and only the first word is
    inflected: ``hop_on`` -> ``hopping on``. Irregulars come from the
    exception table; the remaining cases use a small spelling-rule cascade.
    """
    verb = verb.strip()
    if not verb:
        raise ConfigError("cannot gerundize an empty verb")
    if exceptions is None:
        exceptions = _default_exceptions()

    if verb in exceptions:
        return exceptions[verb]

    if "_" in verb:
        head, *rest = verb.split("_")
        return " ".join([gerundize(head, exceptions)] + rest)

    # Silent final e drops unless doubled (free -> freeing) or load-bearing
    # (be -> being: the stem would lose its only vowel).
    if verb.endswith("e") and not verb.endswith("ee"):
        stem = verb[:-1]
        if any(ch in VOWELS + "y" for ch in stem):
            return stem + "ing"

    if _is_cvc_monosyllable(verb):
        return verb + verb[-1] + "ing"

    return verb + "ing"


def article_for(noun: str) -> str:
    return "an" if noun[:1].lower() in VOWELS else "a"


def make_prompt(label: HoiLabel, exceptions: dict[str, str] | None = None) -> Prompt:
    """Compile one class into a prompt sentence.

    Ordinary verbs: "a person <verb-ing> a/an <object>". The special
    ``no_interaction`` verb becomes "a person and a/an <object>".
    """
    obj = label.object.replace("_", " ")
    art = article_for(obj)
    if label.verb == NO_INTERACTION:
        text = f"a person and {art} {obj}"
    else:
        text = f"a person {gerundize(label.verb, exceptions)} {art} {obj}"
    return Prompt(text=text, source=label)


def make_prompts(classes: ClassList, exceptions: dict[str, str] | None = None) -> list[Prompt]:
    """Prompts for every class, preserving class order."""
    return [make_prompt(label, exceptions) for label in classes]
