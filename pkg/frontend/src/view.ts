// Prediction view model: service payload values shown verbatim, with the
// probability formatted to exactly two decimals and model-quality context
// (AUC, F-2) looked up from /metrics for the model kind that produced each
// prediction.

import type { MetricsDoc, PredictResponse } from "./api.js";

export interface FamilyView {
  family: string;
  model: string;
  probability: number; // raw payload value, untouched
  display: string; // two-decimal rendering of the payload value
  predicted: "R" | "S";
  threshold: number;
  barPercent: number; // bar length proportional to probability
  contextAuc: string;
  contextF2: string;
}

export interface PredictionView {
  families: FamilyView[];
  missing: string[];
}

export function formatProbability(p: number): string {
  return p.toFixed(2);
}

function contextFor(metrics: MetricsDoc | null, family: string, model: string) {
  const row = metrics?.rows.find((r) => r.family === family && r.model === model);
  return {
    auc: row?.auc == null ? "n/a" : row.auc.toFixed(2),
    f2: row?.f2 == null ? "n/a" : row.f2.toFixed(2),
  };
}

/** Families arrive in schema target order from the service and keep it. */
export function buildView(response: PredictResponse, metrics: MetricsDoc | null): PredictionView {
  return {
    families: response.families.map((f) => {
      const ctx = contextFor(metrics, f.family, f.model);
      return {
        family: f.family,
        model: f.model,
        probability: f.probability,
        display: formatProbability(f.probability),
        predicted: f.predicted,
        threshold: f.threshold,
        barPercent: Math.round(100 * f.probability),
        contextAuc: ctx.auc,
        contextF2: ctx.f2,
      };
    }),
    missing: [...response.missing],
  };
}
