/** Apply the three filter families to a server-rendered SVG.
 *
 * The renderer tags every dot with `op-<name>`/`el-<kind>` classes and a
 * `data-element-id` attribute precisely so filtering is a visibility toggle;
 * the UI never touches geometry.  Timelines are never removed.
 */

import type { FiltersJson } from "./api.js";

const opClass = (name: string) => `op-${name.toLowerCase().replace(/_/g, "-")}`;

export function applyFilters(svgRoot: SVGElement | HTMLElement, filters: FiltersJson): number {
  const dots = Array.from(svgRoot.querySelectorAll<SVGElement>(".dot"));
  const hideOps = new Set(filters["hide-operation-kinds"].map(opClass));
  const hideKinds = new Set(filters["hide-element-kinds"].map((k) => `el-${k}`));
  const taintOps = new Set(filters["hide-elements-with-operation"].map(opClass));

  const taintedElements = new Set<string>();
  if (taintOps.size > 0) {
    for (const dot of dots) {
      const classes = (dot.getAttribute("class") ?? "").split(/\s+/);
      if (classes.some((c) => taintOps.has(c))) {
        const eid = dot.getAttribute("data-element-id");
        if (eid !== null) taintedElements.add(eid);
      }
    }
  }

  let visible = 0;
  for (const dot of dots) {
    const classes = (dot.getAttribute("class") ?? "").split(/\s+/);
    const eid = dot.getAttribute("data-element-id") ?? "";
    const hide =
      classes.some((c) => hideOps.has(c) || hideKinds.has(c)) || taintedElements.has(eid);
    if (hide) {
      dot.setAttribute("display", "none");
    } else {
      dot.removeAttribute("display");
      visible += 1;
    }
  }
  return visible;
}

export function visibleDotCount(svgRoot: SVGElement | HTMLElement): number {
  return Array.from(svgRoot.querySelectorAll<SVGElement>(".dot")).filter(
    (d) => d.getAttribute("display") !== "none",
  ).length;
}
