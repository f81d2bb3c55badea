"""Generate a small task corpus and inspect its guarantees."""

from collections import Counter

from graphstage import GenConfig, generate_corpus

config = GenConfig(count=40, seed=7, sizes="wl")
corpus = list(generate_corpus(config))
print(f"{len(corpus)} instances across {len(config.kinds)} task kinds\n")

# every boolean task corpus is answer-balanced by construction
for label in ("cycle_detection:undirected", "path_existence:directed"):
    answers = Counter(
        inst.gold_answer.value for inst in corpus if inst.kind.label == label
    )
    print(f"{label:35s} answers: {dict(answers)}")

# description variants cycle uniformly
variants = Counter(
    inst.description_variant for inst in corpus if inst.kind.tool == "shortest_path"
)
print(f"\nshortest_path variant histogram: {dict(sorted(variants.items()))}")

# a rendered task carries the whole graph inline
sample = next(inst for inst in corpus if inst.kind.label == "maximum_flow:directed")
print(f"\nsample task ({sample.id}):\n{sample.task_text[:400]}")
print(f"\ngold tool={sample.gold_tool} params={sample.gold_params} answer={sample.gold_answer}")
