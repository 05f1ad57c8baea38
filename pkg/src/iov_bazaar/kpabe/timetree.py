"""Hierarchical year/month/day time tree with set-cover validity periods.

A node is a path from the root: (year,), (year, month), or
(year, month, day).  A validity interval is represented by the unique
minimal antichain of nodes whose leaf days tile the interval exactly.
Month lengths follow the real calendar; the per-level arity bound
(years in span, 12 months, 31 days) only caps the path encoding.
"""

from __future__ import annotations

import calendar
import datetime as dt
from dataclasses import dataclass

Node = tuple[int, ...]


class RangeError(ValueError):
    pass


@dataclass(frozen=True)
class TimeTree:
    base_year: int = 2020
    year_span: int = 10

    @property
    def depth(self) -> int:
        # root plus three non-root levels
        return 4

    def check_year(self, year: int) -> None:
        if not self.base_year <= year < self.base_year + self.year_span:
            raise RangeError(f"year {year} outside span "
                             f"[{self.base_year}, {self.base_year + self.year_span})")

    def node_scalars(self, node: Node) -> tuple[int, ...]:
        """1-based child indices per level, used as exponent coordinates."""
        self.check_year(node[0])
        scalars = [node[0] - self.base_year + 1]
        scalars.extend(node[1:])
        return tuple(scalars)


def encode_period(tree: TimeTree, year: int, month: int | None = None,
                  day: int | None = None) -> Node:
    """Path of the node addressing a year, month, or single day."""
    tree.check_year(year)
    if month is None:
        if day is not None:
            raise RangeError("day given without month")
        return (year,)
    if not 1 <= month <= 12:
        raise RangeError(f"month {month} out of range")
    if day is None:
        return (year, month)
    if not 1 <= day <= calendar.monthrange(year, month)[1]:
        raise RangeError(f"day {day} invalid for {year}-{month:02d}")
    return (year, month, day)


def node_first_day(node: Node) -> dt.date:
    y = node[0]
    m = node[1] if len(node) > 1 else 1
    d = node[2] if len(node) > 2 else 1
    return dt.date(y, m, d)


def node_last_day(node: Node) -> dt.date:
    y = node[0]
    if len(node) == 1:
        return dt.date(y, 12, 31)
    m = node[1]
    if len(node) == 2:
        return dt.date(y, m, calendar.monthrange(y, m)[1])
    return dt.date(y, m, node[2])


def set_cover(tree: TimeTree, start: dt.date, end: dt.date) -> list[Node]:
    """Minimal antichain of nodes whose leaves are exactly [start, end]."""
    tree.check_year(start.year)
    tree.check_year(end.year)
    if start > end:
        raise RangeError(f"inverted range {start}..{end}")
    nodes: list[Node] = []
    cur = start
    one_day = dt.timedelta(days=1)
    while cur <= end:
        if cur.month == 1 and cur.day == 1 and end >= dt.date(cur.year, 12, 31):
            nodes.append((cur.year,))
            cur = dt.date(cur.year, 12, 31) + one_day
        elif cur.day == 1 and end >= dt.date(cur.year, cur.month,
                                             calendar.monthrange(cur.year, cur.month)[1]):
            nodes.append((cur.year, cur.month))
            cur = node_last_day((cur.year, cur.month)) + one_day
        else:
            nodes.append((cur.year, cur.month, cur.day))
            cur = cur + one_day
    return nodes


def is_prefix(ancestor: Node, node: Node) -> bool:
    return len(ancestor) <= len(node) and node[:len(ancestor)] == ancestor


def covers(key_periods: list[Node], ct_periods: list[Node]) -> bool:
    """True iff every ciphertext node sits at or below some key node."""
    return all(any(is_prefix(k, c) for k in key_periods) for c in ct_periods)


def covered_days(nodes: list[Node]) -> set[dt.date]:
    """Leaf expansion of a node set (test oracle helper)."""
    days: set[dt.date] = set()
    one_day = dt.timedelta(days=1)
    for node in nodes:
        cur = node_first_day(node)
        last = node_last_day(node)
        while cur <= last:
            days.add(cur)
            cur += one_day
    return days
