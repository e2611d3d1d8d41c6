import logging
from functools import partial
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from locus.core.bicyclic import BicyclicCode
from locus.core.conv import ConvGenerator, ErasurePattern, TailbitingWord, sliding_window_repair, wraparound_pattern
from locus.core.cyclic import LocalRepair, repair_in_group
from locus.core.hlrc import HlrcCode
from locus.core.oracle import LinearCode, PatternSpec, RepairOutcome, RepairStep, RepairTarget, erase_decode
from locus.errors import UnsupportedModeError

log = logging.getLogger(__name__)


class GroupLevel(NamedTuple):
    name: str
    groups: Sequence[Sequence[int]]
    # erasures a single group can fill
    capacity: int
    # fills the eligible erasures of every group at once, in place of a punctured decode
    local_repair: Optional[Callable[[np.ndarray, Sequence[int]], LocalRepair]] = None


class BlockRepairTarget(RepairTarget):
    """
    Local passes over the group levels, smallest first, restarting from the first level
    after any progress; a global erasure decode runs once the local passes are stuck.
    """

    def __init__(self, code: LinearCode, levels: Sequence[GroupLevel], name: str = "block") -> None:
        self.code = code
        self.levels = list(levels)
        self.name = name
        self._local: Dict[Tuple[int, int], LinearCode] = {}

    @property
    def length(self) -> int:
        return self.code.length

    def random_codeword(self, rng: np.random.Generator) -> np.ndarray:
        return self.code.random_codeword(rng)

    def sample_pattern(self, spec: PatternSpec, rng: np.random.Generator) -> List[int]:
        common = self._sample_common(spec, rng)
        if common is not None:
            return common
        if spec.kind == "local":
            if not self.levels:
                raise UnsupportedModeError(f"{self.name} has no repair groups")
            level = self.levels[0]
            erased: List[int] = []
            for group in level.groups:
                count = int(rng.integers(0, level.capacity + 1))
                erased.extend(int(x) for x in rng.choice(list(group), size=min(count, len(group)), replace=False))
            return sorted(set(erased))
        raise UnsupportedModeError(f"Pattern '{spec}' is not supported by {self.name}")

    def _punctured(self, li: int, gi: int, group: Sequence[int]) -> LinearCode:
        key = (li, gi)
        if key not in self._local:
            self._local[key] = self.code.puncture(group)
        return self._local[key]

    def _local_pass(self, li: int, word: np.ndarray, erased: Set[int]) -> List[int]:
        level = self.levels[li]
        recovered: List[int] = []
        eligible: List[int] = []
        for gi, group in enumerate(level.groups):
            group = list(group)
            er = [p for p in group if p in erased]
            if not er or len(er) > level.capacity:
                continue
            if level.local_repair is not None:
                eligible.extend(er)
                continue
            res = erase_decode(self._punctured(li, gi, group), word[group], [group.index(p) for p in er])
            for p in er:
                if group.index(p) not in res.undetermined:
                    word[p] = res.word[group.index(p)]
                    recovered.append(p)
        if eligible:
            local = level.local_repair(word, eligible)
            word[local.recovered] = local.word[local.recovered]
            recovered.extend(local.recovered)
        return sorted(recovered)

    def repair(self, word: np.ndarray, erased: Sequence[int]) -> RepairOutcome:
        word = np.array(word, dtype=np.int64, copy=True)
        left: Set[int] = set(int(e) for e in erased)
        steps: List[RepairStep] = []
        li = 0
        while left and li < len(self.levels):
            rec = self._local_pass(li, word, left)
            if rec:
                left.difference_update(rec)
                steps.append(RepairStep(self.levels[li].name, tuple(rec)))
                li = 0
            else:
                li += 1
        if left:
            res = erase_decode(self.code, word, sorted(left))
            rec = sorted(set(left) - set(res.undetermined))
            if rec:
                word[rec] = res.word[rec]
                left.difference_update(rec)
                steps.append(RepairStep("global", tuple(rec)))
        return RepairOutcome(success=not left, word=word, steps=steps, residual=sorted(left))


def hlrc_target(hl: HlrcCode) -> BlockRepairTarget:
    """
    Levels fill their groups from the local zeros of the cyclic code. Subfield subcodes
    keep the punctured decode, their words live in the base field.
    """
    levels = [
        GroupLevel(
            f"level{i + 1}",
            lc.groups,
            lc.delta - 1,
            local_repair=partial(repair_in_group, hl.code, lc) if hl.base_q is None else None,
        )
        for i, lc in enumerate(hl.locality)
        if lc.delta > 1
    ]
    return BlockRepairTarget(hl.code.linear_code(), levels, name=f"hlrc[{hl.n},{hl.k}]")


def bicyclic_target(c: BicyclicCode) -> BlockRepairTarget:
    levels = [GroupLevel("vertical", c.vertical_groups(), 1), GroupLevel("horizontal", c.horizontal_groups(), 1)]
    return BlockRepairTarget(c.linear_code(), levels, name=f"bicyclic[{c.length},{c.k}]")


class ConvRepairTarget(RepairTarget):
    def __init__(self, g: ConvGenerator, d_window: int, window: Optional[int] = None, tailbiting: bool = True) -> None:
        self.g = g
        self.d_window = d_window
        self.window = window
        self.tailbiting = tailbiting
        self.code = g.linear_code()
        self.name = f"tailbiting({g.n},{g.k})x{g.span}"

    @property
    def length(self) -> int:
        return self.g.n * self.g.span

    def random_codeword(self, rng: np.random.Generator) -> np.ndarray:
        return self.code.random_codeword(rng)

    def sample_pattern(self, spec: PatternSpec, rng: np.random.Generator) -> List[int]:
        common = self._sample_common(spec, rng)
        if common is not None:
            return common
        g = self.g
        if spec.kind == "wraparound":
            if (g.n, g.span) != (4, 8):
                raise UnsupportedModeError(f"The wraparound pattern needs a 4x8 grid, this code is {g.n}x{g.span}")
            return wraparound_pattern().to_block_positions(g.n)
        if spec.kind == "local":
            erased: List[int] = []
            for l in range(g.n):
                for grp in g.row_groups():
                    pos = g.row_positions(l, grp)
                    count = int(rng.integers(0, g.delta))
                    erased.extend(int(x) for x in rng.choice(pos, size=count, replace=False))
            return sorted(erased)
        raise UnsupportedModeError(f"Pattern '{spec}' is not supported by {self.name}")

    def repair(self, word: np.ndarray, erased: Sequence[int]) -> RepairOutcome:
        return sliding_window_repair(
            self.g,
            TailbitingWord.from_block(self.g.field, self.g.n, word),
            ErasurePattern.from_block_positions(self.g.n, erased),
            self.d_window,
            window=self.window,
            tailbiting=self.tailbiting,
        )
