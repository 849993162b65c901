/** The three figure kinds built from scenario CSVs.
 *
 *  Rendering never recomputes physics: it consumes only the documented
 *  CSV schema (time series: t_s, F_B, F_I, F, F_over_FB; thermometry:
 *  T_over_Tc, C, C_over_C0, sqrt_nc; lattice: r, psi, C, C_over_C0).
 */

import { FigureModel } from "./chart.js";
import { ScenarioTable, column, hasColumn } from "./csv.js";

/** Time axis in oscillation periods when the metadata provides delta mu. */
function timeAxis(table: ScenarioTable): { x: number[]; label: string } {
  const t = column(table, "t_s");
  const dmu = Number(table.metadata.get("delta_mu_eff_rad_s"));
  if (Number.isFinite(dmu) && dmu !== 0) {
    const period = (2 * Math.PI) / Math.abs(dmu);
    return { x: t.map((v) => v / period), label: "t (2pi/dmu)" };
  }
  return { x: t, label: "t (s)" };
}

export function timeseriesFigure(table: ScenarioTable): FigureModel {
  const { x, label } = timeAxis(table);
  const y = column(table, "F_over_FB");
  const method = table.metadata.get("method") ?? "exact";
  return {
    title: "photon flux vs time",
    xLabel: label,
    yLabel: "F/F_B",
    series: [{ label: method, x, y }],
    showLegend: false,
  };
}

export function overlayFigure(a: ScenarioTable, b: ScenarioTable): FigureModel {
  const ta = column(a, "t_s");
  const tb = column(b, "t_s");
  if (ta.length !== tb.length || ta.some((v, i) => v !== tb[i])) {
    throw new Error("overlay: time grids of the two inputs do not match");
  }
  const { x, label } = timeAxis(a);
  const labelA = a.metadata.get("method") ?? "exact";
  const labelB = b.metadata.get("method") ?? "approximate";
  return {
    title: "exact vs approximate flux",
    xLabel: label,
    yLabel: "F/F_B",
    series: [
      { label: labelA === "exact" ? "exact" : labelA, x, y: column(a, "F_over_FB") },
      { label: labelB === "exact" ? "approximate" : "approximate", x, y: column(b, "F_over_FB") },
    ],
    showLegend: true,
  };
}

export function amplitudeFigure(table: ScenarioTable): FigureModel {
  if (hasColumn(table, "T_over_Tc")) {
    const x = column(table, "T_over_Tc");
    const series: FigureModel["series"] = [
      { label: "C/C(0)", x, y: column(table, "C_over_C0") },
    ];
    if (hasColumn(table, "sqrt_nc")) {
      series.push({ label: "sqrt(n_c)", x, y: column(table, "sqrt_nc"), dashed: true });
    }
    return {
      title: "oscillation amplitude vs temperature",
      xLabel: "T/T_c",
      yLabel: "C/C(0)",
      series,
      showLegend: series.length > 1,
    };
  }
  if (hasColumn(table, "r")) {
    return {
      title: "oscillation amplitude across the transition",
      xLabel: "r = zJ/U",
      yLabel: "C/C(0)",
      series: [{ label: "C/C(0)", x: column(table, "r"), y: column(table, "C_over_C0") }],
      showLegend: false,
    };
  }
  throw new Error('missing column "T_over_Tc" or "r" for an amplitude sweep');
}
