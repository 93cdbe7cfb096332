from __future__ import annotations

from pydantic import BaseModel, Field


class Derivation(BaseModel):
    """
    One step of a structural derivation.

    Vertices are always given in the labels of the tournament the caller
    passed in, never in the labels of an intermediate subtournament.
    """

    rule: str
    vertices: tuple[int, ...]
    detail: str = ""
    children: list[Derivation] = Field(default_factory=list)

    def render(self, indent=0):
        """
        Render the derivation as indented text lines.

        Args:
            indent (int): Current nesting depth

        Returns:
            list: One string per node
        """
        label = " ".join(str(v) for v in self.vertices)
        line = f"{'  ' * indent}{self.rule} [{label}]"
        if self.detail:
            line += f" {self.detail}"
        lines = [line]
        for child in self.children:
            lines.extend(child.render(indent + 1))
        return lines


def relabel(derivation, mapping):
    """
    Translate a derivation's vertices through a vertex mapping.

    Args:
        derivation (Derivation): Derivation in local labels
        mapping (sequence of int): mapping[local] = outer label

    Returns:
        Derivation: Same tree in outer labels
    """
    return Derivation(
        rule=derivation.rule,
        vertices=tuple(mapping[v] for v in derivation.vertices),
        detail=derivation.detail,
        children=[relabel(child, mapping) for child in derivation.children],
    )
