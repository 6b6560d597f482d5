"""Budgeted pyramid expansion of retrieved candidates.

Level 1 always emits every candidate's summary and charges nothing.
Level 2 considers candidates whose similarity clears the gate, walking
them from the most to the least similar (ties toward the lower id), and
swaps in the full text behind each one's cold ref; charging stops at the
first text that would overflow the budget, which keeps the expanded set
monotone under both a rising gate and a growing budget. Level 3 then
spends what is left of the same budget attaching raw (non-text) payloads,
greedily by similarity per token, ties toward the lower id. The combined
level 2 plus level 3 charge never exceeds the budget.

Block order in the returned bundle is always candidate order.
"""

from __future__ import annotations

from ..core.config import EngineConfig
from ..core.tokens import approx_token_count
from ..core.types import Mau
from ..storage.cold import ColdMissing, ColdStore
from .model import Candidate, ContextBlock, ContextBundle


def _decode_text(payload: bytes) -> str | None:
    try:
        return payload.decode("utf-8")
    except UnicodeDecodeError:
        return None


def pyramid_expand(candidates: list[Candidate], maus: dict[int, Mau],
                   cold: ColdStore, cfg: EngineConfig) -> ContextBundle:
    bundle = ContextBundle()
    blocks: dict[int, ContextBlock] = {}
    for cand in candidates:
        mau = maus[cand.mau_id]
        block = ContextBlock(mau_id=cand.mau_id, level=1, text=mau.summary)
        bundle.blocks.append(block)
        blocks[cand.mau_id] = block

    budget = cfg.budget_B_tokens
    spent = 0

    gated = sorted((c for c in candidates if c.sim > cfg.theta),
                   key=lambda c: (-c.sim, c.mau_id))

    # level 2: full text, most similar first, stop at the first overflow
    raw_eligible: list[tuple[Candidate, bytes]] = []
    for cand in gated:
        mau = maus[cand.mau_id]
        if mau.cold_ref is None:
            continue
        try:
            payload = cold.get(mau.cold_ref)
        except ColdMissing:
            bundle.warnings.append(
                f"mau {cand.mau_id}: cold object {mau.cold_ref} missing; "
                f"kept the summary")
            continue
        text = _decode_text(payload)
        if text is None:
            # raw media payload: nothing textual to swap in, defer to level 3
            raw_eligible.append((cand, payload))
            continue
        if text == mau.summary:
            continue
        cost = approx_token_count(text)
        if spent + cost > budget:
            break
        block = blocks[cand.mau_id]
        block.text = text
        block.level = 2
        block.token_cost = cost
        spent += cost

    # level 3: greedy by sim per token over the remaining budget
    def ratio_key(item: tuple[Candidate, bytes]) -> tuple[float, int]:
        cand, payload = item
        cost = max(1, (len(payload) + 3) // 4)
        return (-cand.sim / cost, cand.mau_id)

    for cand, payload in sorted(raw_eligible, key=ratio_key):
        cost = (len(payload) + 3) // 4
        if spent + cost <= budget:
            block = blocks[cand.mau_id]
            block.media_ref = maus[cand.mau_id].cold_ref
            block.level = 3
            block.token_cost += cost
            spent += cost

    bundle.total_expansion_tokens = spent
    return bundle


def summaries_only(candidates: list[Candidate], maus: dict[int, Mau]) -> ContextBundle:
    """The no-expansion bundle used when the pyramid is disabled."""
    bundle = ContextBundle()
    for cand in candidates:
        mau = maus[cand.mau_id]
        bundle.blocks.append(ContextBlock(mau_id=cand.mau_id, level=1, text=mau.summary))
    return bundle
