"""Instrumented conditional-branch sites of the five graph kernels.

Each site is named ``<kernel>_<line>`` after the GAP source line of the
conditional it models, and carries a synthetic PC::

    synthetic_pc = (kernel_ordinal << 20) | (line_tag << 4)
"""
from __future__ import annotations

from dataclasses import dataclass

KERNELS = ("bfs", "pr", "cc", "bc", "tc")
KERNEL_ORDINAL = {k: i + 1 for i, k in enumerate(KERNELS)}
KERNEL_OF_ORDINAL = {v: k for k, v in KERNEL_ORDINAL.items()}

# Conditionals the kernels are known to be dominated by.
LISTED_LINES = {
    "tc": (58, 62, 64),
    "cc": (45, 50, 63, 137, 141),
    "pr": (48,),
    "bc": (70, 71, 75, 125, 126),
    "bfs": (52, 53, 54, 76, 78),
}
# Extra control sites traced but never counted as critical.
CONTROL_LINES = {"pr": (46,)}


def synthetic_pc(kernel: str, line_tag: int) -> int:
    return (KERNEL_ORDINAL[kernel] << 20) | (line_tag << 4)


@dataclass(frozen=True)
class BranchSite:
    site_id: int
    kernel: str
    line_tag: int
    synthetic_pc: int
    name: str = ""

    def __post_init__(self):
        if not self.name:
            object.__setattr__(self, "name", f"{self.kernel}_{self.line_tag}")

    @property
    def kernel_ordinal(self) -> int:
        if self.kernel in KERNEL_ORDINAL:
            return KERNEL_ORDINAL[self.kernel]
        # foreign ordinals read back from a trace are kept as "k<ordinal>"
        if self.kernel[:1] == "k" and self.kernel[1:].isdigit():
            return int(self.kernel[1:])
        return 0

    @property
    def label(self) -> str:
        return self.name

    @property
    def listed(self) -> bool:
        return self.line_tag in LISTED_LINES.get(self.kernel, ())


def _build_table() -> dict[str, BranchSite]:
    table = {}
    sid = 0
    for kernel in KERNELS:
        lines = sorted(LISTED_LINES[kernel] + CONTROL_LINES.get(kernel, ()))
        for line in lines:
            site = BranchSite(sid, kernel, line, synthetic_pc(kernel, line))
            table[site.name] = site
            sid += 1
    return table


SITES: dict[str, BranchSite] = _build_table()


def kernel_sites(kernel: str) -> list[BranchSite]:
    return [s for s in SITES.values() if s.kernel == kernel]
