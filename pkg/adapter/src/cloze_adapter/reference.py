"""Reference results from the original full-scale training runs.

Dev F1 for the base-size model fine-tuned on 150k examples for one epoch,
over ten random seeds — the scale of run this adapter mirrors structurally
but cannot reproduce on desk hardware. Kept for comparison only.
"""

REFERENCE_DEV_F1_PER_SEED = (
    0.8940, 0.8936, 0.8953, 0.8942, 0.8957,
    0.8930, 0.8941, 0.8947, 0.8936, 0.8944,
)
REFERENCE_DEV_F1_RANGE = (min(REFERENCE_DEV_F1_PER_SEED), max(REFERENCE_DEV_F1_PER_SEED))
