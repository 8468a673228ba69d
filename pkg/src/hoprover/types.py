"""Simple types: base types and right-associated function arrows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union


@dataclass(frozen=True)
class BaseType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FunType:
    arg: "TypeExpr"
    res: "TypeExpr"

    def __str__(self) -> str:
        a = str(self.arg)
        if isinstance(self.arg, FunType):
            a = f"({a})"
        return f"{a} > {self.res}"


TypeExpr = Union[BaseType, FunType]

I = BaseType("$i")
O = BaseType("$o")


def arrow(*tys: TypeExpr) -> TypeExpr:
    """``arrow(a, b, c)`` is ``a > (b > c)``."""
    if not tys:
        raise ValueError("arrow needs at least one type")
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = FunType(t, out)
    return out


def fun_of(args: Iterable[TypeExpr], res: TypeExpr) -> TypeExpr:
    args = list(args)
    return arrow(*args, res) if args else res


def split_type(ty: TypeExpr) -> tuple[list[TypeExpr], TypeExpr]:
    """Return (argument types, final base result)."""
    args = []
    while isinstance(ty, FunType):
        args.append(ty.arg)
        ty = ty.res
    return args, ty


def arity(ty: TypeExpr) -> int:
    n = 0
    while isinstance(ty, FunType):
        n += 1
        ty = ty.res
    return n


def drop_args(ty: TypeExpr, n: int) -> TypeExpr:
    for _ in range(n):
        if not isinstance(ty, FunType):
            raise TypeError(f"cannot apply {n} arguments to a term of type {ty}")
        ty = ty.res
    return ty


def is_predicate_type(ty: TypeExpr) -> bool:
    return split_type(ty)[1] == O


def base_types(ty: TypeExpr) -> set[BaseType]:
    if isinstance(ty, BaseType):
        return {ty}
    return base_types(ty.arg) | base_types(ty.res)
