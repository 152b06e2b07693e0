#!/usr/bin/env python3
"""Turn a verb-object class list into prompt sentences for a text encoder.

Interaction classes arrive as `verb object` pairs, one per line. Each
becomes a natural sentence ("a person riding a bicycle") that a text
encoder can embed; those embeddings later initialize the classifier rows.
"""

from hoihead import make_prompts, parse_class_list
from hoihead.labelspace import gerundize

CLASS_LIST = """\
ride bicycle
eat apple
hop_on motorcycle
lie_on bed
cut_with knife
sit_at dining_table
no_interaction umbrella
"""

classes = parse_class_list(CLASS_LIST)
print(f"{classes.C} classes ->")
for prompt in make_prompts(classes):
    label = prompt.source
    print(f"  ({label.verb!r:>18}, {label.object!r:>14}) -> {prompt.text!r}")

# The inflection handles doubling, silent-e and irregulars; multiword verbs
# split on the underscore and only the head word changes.
print("\nsome gerund forms:")
for verb in ("ride", "cut", "make", "hop_on", "lie", "tie", "stand_under", "be"):
    print(f"  {verb:>12} -> {gerundize(verb)}")
