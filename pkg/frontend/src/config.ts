/** The chart configuration vocabulary and its default values. */

import type { ChartConfigJson } from "./api.js";

export const TIME_OPTIONS = ["actual", "relative-time", "relative-ratio"] as const;

export const TIME_INTERVALS = [
  "l1", "l10", "l100", "l500",
  "seconds", "minutes", "half-hours", "hours",
  "days", "weeks", "months", "years",
] as const;

export const COLOR_BY = ["none", "operation"] as const;
export const SHAPE_BY = ["none", "model-element"] as const;

export const SORT_BY = [
  "none", "model-element", "number-of-operations", "duration",
  "distance-from-start", "create-order-from-start", "first-operation",
  "last-operation",
] as const;

export const ELEMENT_KINDS = [
  "start-event", "end-event", "activity", "xor-gateway", "and-gateway", "edge",
] as const;

export const SHAPES = ["square", "circle", "diamond", "triangle"] as const;

export function defaultConfig(): ChartConfigJson {
  return {
    "time-option": "actual",
    "time-interval": "hours",
    "color-by": "operation",
    "shape-by": "model-element",
    "sort-by": "distance-from-start",
    descending: false,
    "window-ms": 3_600_000,
    filters: {
      "hide-element-kinds": [],
      "hide-operation-kinds": [],
      "hide-elements-with-operation": [],
    },
    "style-overrides": {},
  };
}

export function cloneConfig(config: ChartConfigJson): ChartConfigJson {
  return JSON.parse(JSON.stringify(config)) as ChartConfigJson;
}

export function configsEqual(a: ChartConfigJson, b: ChartConfigJson): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

/** The config sent with chart requests: filters stay client-side (CSS
 * visibility over the server-rendered dots), so one fetch serves both the
 * filtered main chart and the unfiltered preview. */
export function unfiltered(config: ChartConfigJson): ChartConfigJson {
  const out = cloneConfig(config);
  out.filters = {
    "hide-element-kinds": [],
    "hide-operation-kinds": [],
    "hide-elements-with-operation": [],
  };
  return out;
}
