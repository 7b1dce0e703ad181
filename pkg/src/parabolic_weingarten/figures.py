"""Parameter sets for the six reference figures and their rendering."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import classify, emit
from .odetrace import GeneratingCurve, trace
from .params import GaussConstant, InitialConditions, LinearPrincipal


@dataclass(frozen=True)
class Panel:
    label: str
    spec: object
    theta0: float = 0.0


@dataclass(frozen=True)
class Figure:
    name: str
    caption: str
    panels: tuple
    #: whether the curves carry theorem predictions that verify() must confirm
    gated: bool = True


FIGURES = (
    Figure("fig1", "Constant K, theta0 = 0: (a) K = 1, (b) K = 0",
           (Panel("(a) K = 1", GaussConstant(1.0)), Panel("(b) K = 0", GaussConstant(0.0)))),
    Figure("fig2", "Constant K, theta0 = 0: (a) K = -0.5, (b) K = -2",
           (Panel("(a) K = -0.5", GaussConstant(-0.5)), Panel("(b) K = -2", GaussConstant(-2.0)))),
    Figure("fig3", "Constant K, theta0 = pi/4: (a) K = 0, (b) K = -1/4",
           (Panel("(a) K = 0", GaussConstant(0.0), math.pi / 4),
            Panel("(b) K = -1/4", GaussConstant(-0.25), math.pi / 4)),
           gated=False),
    Figure("fig4", "k1 = m k2 + n, theta0 = 0: (a) m = 1, n = 2; (b) m = 3, n = 1",
           (Panel("(a) m = 1, n = 2", LinearPrincipal(1.0, 2.0)),
            Panel("(b) m = 3, n = 1", LinearPrincipal(3.0, 1.0)))),
    Figure("fig5", "k1 = m k2 + n, theta0 = 0: (a) m = 2, n = 0; (b) m = -2, n = 1",
           (Panel("(a) m = 2, n = 0", LinearPrincipal(2.0, 0.0)),
            Panel("(b) m = -2, n = 1", LinearPrincipal(-2.0, 1.0)))),
    Figure("fig6", "k1 = m k2 + n with m = -2, n = 3, theta0 = pi/2",
           (Panel("m = -2, n = 3", LinearPrincipal(-2.0, 3.0), math.pi / 2),)),
)


@dataclass
class PanelResult:
    panel: Panel
    curve: GeneratingCurve
    report: classify.ClassificationReport
    features_match: bool
    outcome: classify.VerificationOutcome | None


@dataclass
class FigureResult:
    figure: Figure
    svg: str
    panels: list

    @property
    def ok(self) -> bool:
        return all(p.features_match and (p.outcome is None or p.outcome.passed) for p in self.panels)


def evaluate_panel(panel: Panel, gated: bool) -> PanelResult:
    curve = trace(panel.spec, InitialConditions(theta0=panel.theta0))
    report = classify.predict(panel.spec, panel.theta0)
    match = not classify._compare(report.predicted, classify.measure(curve))
    outcome = classify.verify(panel.spec, curve, report) if gated else None
    return PanelResult(panel, curve, report, match, outcome)


def build(figure: Figure) -> FigureResult:
    results = [evaluate_panel(p, figure.gated) for p in figure.panels]
    style = emit.SvgStyle(
        caption=figure.caption,
        labels=tuple(p.label for p in figure.panels),
        panels=len(figure.panels) > 1,
    )
    svg = emit.render_svg([r.curve for r in results], style)
    return FigureResult(figure, svg, results)
