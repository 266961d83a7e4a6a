/** The chart explorer app: config panel left, chart center, filter/settings
 * panel right.  Drafted configuration is applied only when Update is pressed,
 * producing exactly one chart request; the A.2 filters and the small
 * unfiltered preview reuse the same response client-side.  At most one chart
 * request is in flight; stale responses are discarded (latest wins). */

import {
  ApiError,
  type ChartConfigJson,
  type Client,
  type FiltersJson,
  type LegendRow,
  type LogHandle,
  type StyleOverride,
} from "./api.js";
import {
  COLOR_BY,
  ELEMENT_KINDS,
  SHAPE_BY,
  SHAPES,
  SORT_BY,
  TIME_INTERVALS,
  TIME_OPTIONS,
  cloneConfig,
  defaultConfig,
  unfiltered,
} from "./config.js";
import { applyFilters, visibleDotCount } from "./filters.js";
import { Viewport, sliderToZoom, zoomToSlider } from "./viewport.js";

export type MouseMode = "select" | "zoom-in" | "drag";

export interface UiState {
  logs: LogHandle[];
  selectedLogId: string | null;
  applied: ChartConfigJson | null; // config of the chart on screen
  mouseMode: MouseMode;
  notices: string[];
}

export interface AppHandle {
  state: UiState;
  viewport: Viewport;
  root: HTMLElement;
  refreshLogs(): Promise<void>;
  selectLog(id: string): Promise<void>;
  uploadContent(name: string, content: string): Promise<LogHandle>;
  update(): Promise<void>;
  readDraft(): ChartConfigJson;
  writeDraft(config: ChartConfigJson): void;
  visibleDots(): number;
}

const esc = (value: string) => value.replace(/&/g, "&amp;").replace(/</g, "&lt;");

function options(values: readonly string[]): string {
  return values.map((v) => `<option value="${v}">${v}</option>`).join("");
}

function checkboxList(prefix: string, values: readonly string[]): string {
  return values
    .map(
      (v) =>
        `<label class="check"><input type="checkbox" data-filter="${prefix}" value="${v}"> ${esc(v)}</label>`,
    )
    .join("");
}

function buildDom(root: HTMLElement, legend: LegendRow[]): void {
  const opNames = legend.map((row) => row.name);
  root.classList.add("ppm-app");
  root.innerHTML = `
  <header class="toolbar">
    <span class="title">session charts</span>
    <select id="log-select" title="session log"></select>
    <input type="file" id="upload-input" accept=".xes,.xml,.csv">
    <span class="spacer"></span>
    <span class="mouse-modes">
      <label><input type="radio" name="mouse-mode" value="select" checked> select</label>
      <label><input type="radio" name="mouse-mode" value="zoom-in"> zoom in</label>
      <label><input type="radio" name="mouse-mode" value="drag"> drag</label>
    </span>
    <label>zoom x <input type="range" id="zoom-x-slider" min="-100" max="100" value="0"></label>
    <label>zoom y <input type="range" id="zoom-y-slider" min="-100" max="100" value="0"></label>
    <button id="zoom-out-btn" type="button">zoom out</button>
  </header>
  <main>
    <aside class="config-panel">
      <h3>view</h3>
      <label>time option <select id="time-option">${options(TIME_OPTIONS)}</select></label>
      <label>time interval <select id="time-interval">${options(TIME_INTERVALS)}</select></label>
      <label>color by <select id="color-by">${options(COLOR_BY)}</select></label>
      <label>shape by <select id="shape-by">${options(SHAPE_BY)}</select></label>
      <label>sort by <select id="sort-by">${options(SORT_BY)}</select></label>
      <label class="check"><input type="checkbox" id="descending"> descending</label>
      <label>window (ms) <input type="number" id="window-ms" min="1" step="1000"></label>
      <button id="update-btn" type="button">Update</button>
    </aside>
    <section class="chart-area">
      <div class="banner" id="banner" hidden></div>
      <div class="chart-frame" id="chart-frame">
        <div class="chart-inner" id="chart-inner"></div>
        <div class="select-rect" id="select-rect" hidden></div>
      </div>
      <div class="tooltip" id="tooltip" hidden></div>
    </section>
    <aside class="right-panel">
      <nav class="tabs">
        <button id="tab-filters-btn" type="button" class="active">Filters</button>
        <button id="tab-settings-btn" type="button">Settings</button>
      </nav>
      <div id="tab-filters">
        <div class="preview-frame"><div class="preview-inner" id="preview-inner"></div></div>
        <details open><summary>Hide next model elements</summary>
          ${checkboxList("hide-element-kinds", ELEMENT_KINDS)}
        </details>
        <details><summary>Hide next operations</summary>
          ${checkboxList("hide-operation-kinds", opNames)}
        </details>
        <details><summary>Hide all elements with these operations</summary>
          ${checkboxList("hide-elements-with-operation", opNames)}
        </details>
      </div>
      <div id="tab-settings" hidden>
        <p class="hint">click a color or shape to override the coding</p>
        <div id="settings-rows">
          ${legend
            .map(
              (row) => `
          <div class="style-row" data-op="${row.name}">
            <span class="op-name">${esc(row.name)}</span>
            <input type="color" id="style-color-${row.name}" value="${row.hex}">
            <select id="style-shape-${row.name}">${options(SHAPES)}</select>
          </div>`,
            )
            .join("")}
        </div>
        <button id="style-reset-btn" type="button">reset coding</button>
      </div>
    </aside>
  </main>`;
  for (const row of legend) {
    const select = root.querySelector<HTMLSelectElement>(
      `#style-shape-${cssEscape(row.name)}`,
    )!;
    select.value = row.shape;
  }
}

function cssEscape(value: string): string {
  return value.replace(/([^a-zA-Z0-9_-])/g, "\\$1");
}

const hexOf = (rgb: [number, number, number]) =>
  "#" + rgb.map((c) => c.toString(16).padStart(2, "0")).join("");

export async function initApp(root: HTMLElement, client: Client): Promise<AppHandle> {
  const legend = await client.legend();
  const defaults = new Map(legend.map((row) => [row.name, { hex: row.hex, shape: row.shape }]));
  buildDom(root, legend);

  const el = <T extends HTMLElement>(id: string) => root.querySelector<T>(`#${id}`)!;
  const chartFrame = el<HTMLDivElement>("chart-frame");
  const chartInner = el<HTMLDivElement>("chart-inner");
  const previewInner = el<HTMLDivElement>("preview-inner");
  const banner = el<HTMLDivElement>("banner");
  const tooltip = el<HTMLDivElement>("tooltip");
  const selectRect = el<HTMLDivElement>("select-rect");
  const logSelect = el<HTMLSelectElement>("log-select");

  const state: UiState = {
    logs: [],
    selectedLogId: null,
    applied: null,
    mouseMode: "select",
    notices: [],
  };
  const viewport = new Viewport(chartFrame, chartInner);
  let chartSeq = 0;

  // ----- configuration draft <-> controls

  function readDraft(): ChartConfigJson {
    const config = defaultConfig();
    config["time-option"] = el<HTMLSelectElement>("time-option").value;
    config["time-interval"] = el<HTMLSelectElement>("time-interval").value;
    config["color-by"] = el<HTMLSelectElement>("color-by").value;
    config["shape-by"] = el<HTMLSelectElement>("shape-by").value;
    config["sort-by"] = el<HTMLSelectElement>("sort-by").value;
    config.descending = el<HTMLInputElement>("descending").checked;
    config["window-ms"] = Number(el<HTMLInputElement>("window-ms").value) || 3_600_000;
    const filters: FiltersJson = config.filters;
    for (const box of root.querySelectorAll<HTMLInputElement>("input[data-filter]")) {
      if (box.checked) {
        filters[box.dataset.filter as keyof FiltersJson].push(box.value);
      }
    }
    const overrides: Record<string, StyleOverride> = {};
    for (const row of root.querySelectorAll<HTMLElement>(".style-row")) {
      const op = row.dataset.op!;
      const color = row.querySelector<HTMLInputElement>("input[type=color]")!.value;
      const shape = row.querySelector<HTMLSelectElement>("select")!.value;
      const base = defaults.get(op)!;
      if (color.toLowerCase() !== base.hex.toLowerCase() || shape !== base.shape) {
        overrides[op] = { color, shape };
      }
    }
    config["style-overrides"] = overrides;
    return config;
  }

  function writeDraft(config: ChartConfigJson): void {
    el<HTMLSelectElement>("time-option").value = config["time-option"];
    el<HTMLSelectElement>("time-interval").value = config["time-interval"];
    el<HTMLSelectElement>("color-by").value = config["color-by"];
    el<HTMLSelectElement>("shape-by").value = config["shape-by"];
    el<HTMLSelectElement>("sort-by").value = config["sort-by"];
    el<HTMLInputElement>("descending").checked = config.descending;
    el<HTMLInputElement>("window-ms").value = String(config["window-ms"]);
    for (const box of root.querySelectorAll<HTMLInputElement>("input[data-filter]")) {
      const family = box.dataset.filter as keyof FiltersJson;
      box.checked = config.filters[family].includes(box.value);
    }
    for (const row of root.querySelectorAll<HTMLElement>(".style-row")) {
      const op = row.dataset.op!;
      const override = config["style-overrides"][op];
      const base = defaults.get(op)!;
      const color = row.querySelector<HTMLInputElement>("input[type=color]")!;
      const shape = row.querySelector<HTMLSelectElement>("select")!;
      if (override) {
        color.value = Array.isArray(override.color)
          ? hexOf(override.color as [number, number, number])
          : override.color;
        shape.value = override.shape;
      } else {
        color.value = base.hex;
        shape.value = base.shape;
      }
    }
  }

  // ----- feedback

  function showBanner(text: string): void {
    banner.textContent = text;
    banner.hidden = false;
  }

  function describe(err: unknown): string {
    if (err instanceof ApiError) {
      const field = err.field ? ` [field: ${err.field}]` : "";
      return `${err.code}: ${err.message}${field}`;
    }
    return "network error; showing the last chart";
  }

  // ----- the one chart request per Update

  async function update(): Promise<void> {
    if (state.selectedLogId === null) return;
    const draft = readDraft();
    const seq = ++chartSeq;
    try {
      const { svg, notices } = await client.chartSvg(
        state.selectedLogId,
        unfiltered(draft),
      );
      if (seq !== chartSeq) return; // a newer request already landed
      const markup = svg.replace(/^<\?xml[^>]*\?>\s*/, "");
      chartInner.innerHTML = markup;
      previewInner.innerHTML = markup; // the unfiltered preview, same bytes
      applyFilters(chartInner, draft.filters);
      state.applied = cloneConfig(draft);
      state.notices = notices;
      banner.hidden = true;
      tooltip.hidden = true;
      if (notices.length > 0) {
        showBanner(`notice: ${notices.join(", ")}`);
      }
    } catch (err) {
      if (seq === chartSeq) showBanner(describe(err)); // keep the last chart
    }
  }

  // ----- log management

  async function refreshLogs(): Promise<void> {
    state.logs = await client.listLogs();
    logSelect.innerHTML = state.logs
      .map((h) => `<option value="${h.id}">${esc(h.name)} (${h["event-count"]} ops)</option>`)
      .join("");
    if (state.selectedLogId) logSelect.value = state.selectedLogId;
  }

  async function selectLog(id: string): Promise<void> {
    state.selectedLogId = id;
    logSelect.value = id;
    await update();
  }

  async function uploadContent(name: string, content: string): Promise<LogHandle> {
    const handle = await client.uploadLog(content, name);
    await refreshLogs();
    await selectLog(handle.id);
    return handle;
  }

  // ----- wiring

  el<HTMLButtonElement>("update-btn").addEventListener("click", () => void update());
  logSelect.addEventListener("change", () => void selectLog(logSelect.value));
  el<HTMLInputElement>("upload-input").addEventListener("change", async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      await uploadContent(file.name, await file.text());
    } catch (err) {
      showBanner(describe(err));
    }
  });

  for (const radio of root.querySelectorAll<HTMLInputElement>("input[name=mouse-mode]")) {
    radio.addEventListener("change", () => {
      if (radio.checked) state.mouseMode = radio.value as MouseMode;
    });
  }

  const zoomX = el<HTMLInputElement>("zoom-x-slider");
  const zoomY = el<HTMLInputElement>("zoom-y-slider");
  const syncSliderZoom = () =>
    viewport.setZoom(sliderToZoom(Number(zoomX.value)), sliderToZoom(Number(zoomY.value)));
  zoomX.addEventListener("input", syncSliderZoom);
  zoomY.addEventListener("input", syncSliderZoom);
  el<HTMLButtonElement>("zoom-out-btn").addEventListener("click", () => {
    viewport.reset();
    zoomX.value = "0";
    zoomY.value = "0";
  });

  const tabFilters = el<HTMLDivElement>("tab-filters");
  const tabSettings = el<HTMLDivElement>("tab-settings");
  el<HTMLButtonElement>("tab-filters-btn").addEventListener("click", () => {
    tabFilters.hidden = false;
    tabSettings.hidden = true;
  });
  el<HTMLButtonElement>("tab-settings-btn").addEventListener("click", () => {
    tabFilters.hidden = true;
    tabSettings.hidden = false;
  });
  el<HTMLButtonElement>("style-reset-btn").addEventListener("click", () => {
    const config = readDraft();
    config["style-overrides"] = {};
    writeDraft(config);
  });

  // ----- mouse interaction on the chart

  let dragStart: { clientX: number; clientY: number } | null = null;
  let dragLast: { clientX: number; clientY: number } | null = null;

  chartFrame.addEventListener("mousedown", (ev) => {
    dragStart = { clientX: ev.clientX, clientY: ev.clientY };
    dragLast = dragStart;
    if (state.mouseMode !== "drag") {
      selectRect.hidden = false;
      positionOverlay(ev.clientX, ev.clientY, ev.clientX, ev.clientY);
    }
  });

  chartFrame.addEventListener("mousemove", (ev) => {
    if (!dragStart || !dragLast) return;
    if (state.mouseMode === "drag") {
      viewport.panBy(ev.clientX - dragLast.clientX, ev.clientY - dragLast.clientY);
      dragLast = { clientX: ev.clientX, clientY: ev.clientY };
    } else {
      positionOverlay(dragStart.clientX, dragStart.clientY, ev.clientX, ev.clientY);
    }
  });

  chartFrame.addEventListener("mouseup", (ev) => {
    if (!dragStart) return;
    const start = dragStart;
    dragStart = null;
    dragLast = null;
    selectRect.hidden = true;
    const a = viewport.toChart(start.clientX, start.clientY);
    const b = viewport.toChart(ev.clientX, ev.clientY);
    if (state.mouseMode === "select") {
      void showTooltipFor(a, b, ev.clientX, ev.clientY);
    } else if (state.mouseMode === "zoom-in") {
      viewport.zoomToRect(a.x, a.y, b.x, b.y);
      zoomX.value = String(zoomToSlider(viewport.zoomX));
      zoomY.value = String(zoomToSlider(viewport.zoomY));
    }
  });

  function positionOverlay(x0: number, y0: number, x1: number, y1: number): void {
    const rect = chartFrame.getBoundingClientRect();
    selectRect.style.left = `${Math.min(x0, x1) - rect.left}px`;
    selectRect.style.top = `${Math.min(y0, y1) - rect.top}px`;
    selectRect.style.width = `${Math.abs(x1 - x0)}px`;
    selectRect.style.height = `${Math.abs(y1 - y0)}px`;
  }

  async function showTooltipFor(
    a: { x: number; y: number },
    b: { x: number; y: number },
    clientX: number,
    clientY: number,
  ): Promise<void> {
    if (state.selectedLogId === null || state.applied === null) return;
    try {
      const dots = await client.hitTest(state.selectedLogId, state.applied, {
        x0: a.x, y0: a.y, x1: b.x, y1: b.y,
      });
      if (dots.length === 0) {
        tooltip.hidden = true;
        return;
      }
      tooltip.innerHTML = dots
        .slice(0, 12)
        .map(
          (d) =>
            `<div class="tip-row">${esc(d.operation)} — ${esc(d["element-id"])} — ` +
            `${new Date(d["t-actual"]).toISOString()}</div>`,
        )
        .join("") + (dots.length > 12 ? `<div class="tip-row">… ${dots.length - 12} more</div>` : "");
      const rect = chartFrame.getBoundingClientRect();
      tooltip.style.left = `${clientX - rect.left + 12}px`;
      tooltip.style.top = `${clientY - rect.top + 12}px`;
      tooltip.hidden = false;
    } catch (err) {
      showBanner(describe(err));
    }
  }

  // ----- boot

  writeDraft(defaultConfig());
  await refreshLogs();
  if (state.logs.length > 0) {
    await selectLog(state.logs[0].id);
  }

  return {
    state,
    viewport,
    root,
    refreshLogs,
    selectLog,
    uploadContent,
    update,
    readDraft,
    writeDraft,
    visibleDots: () => visibleDotCount(chartInner),
  };
}
