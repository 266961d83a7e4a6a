/** Update semantics, request accounting, uploads, errors, stale responses. */

import { describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { initApp } from "../src/app.js";
import {
  SAMPLE_CSV,
  baseUrl,
  bootApp,
  clickUpdate,
  control,
  setSelect,
  settle,
} from "./helpers.js";

describe("update flow", () => {
  it("renders a server SVG after selecting a log", async () => {
    const { root } = await bootApp();
    const svg = root.querySelector("#chart-inner svg");
    expect(svg).not.toBeNull();
    expect(svg!.querySelectorAll(".dot").length).toBeGreaterThan(0);
  });

  it("sends exactly one chart request per Update, carrying the new value", async () => {
    const { app, root, counter } = await bootApp();
    const before = counter.chartRequests();
    setSelect(root, "sort-by", "first-operation");
    expect(counter.chartRequests()).toBe(before); // draft only; no fetch yet
    clickUpdate(root);
    await settle();
    expect(counter.chartRequests()).toBe(before + 1);
    const last = counter.calls.filter((c) => /\/chart$/.test(c.url)).pop()!;
    expect(JSON.parse(last.body!).config["sort-by"]).toBe("first-operation");
    expect(app.state.applied!["sort-by"]).toBe("first-operation");
  });

  it("applied config tracks the displayed chart, not the draft", async () => {
    const { app, root } = await bootApp();
    setSelect(root, "color-by", "none");
    expect(app.state.applied!["color-by"]).toBe("operation"); // not applied yet
    clickUpdate(root);
    await settle();
    expect(app.state.applied!["color-by"]).toBe("none");
  });

  it("every config family reaches the request body", async () => {
    const { root, counter } = await bootApp();
    setSelect(root, "time-option", "relative-time");
    setSelect(root, "time-interval", "minutes");
    setSelect(root, "shape-by", "none");
    control<HTMLInputElement>(root, "descending").checked = true;
    control<HTMLInputElement>(root, "window-ms").value = "600000";
    clickUpdate(root);
    await settle();
    const body = JSON.parse(counter.calls.filter((c) => /\/chart$/.test(c.url)).pop()!.body!);
    expect(body.config["time-option"]).toBe("relative-time");
    expect(body.config["time-interval"]).toBe("minutes");
    expect(body.config["shape-by"]).toBe("none");
    expect(body.config.descending).toBe(true);
    expect(body.config["window-ms"]).toBe(600000);
  });

  it("uploads a log, lists it, and charts it", async () => {
    const { app, root } = await bootApp();
    const handle = await app.uploadContent("second.csv", SAMPLE_CSV);
    expect(app.state.selectedLogId).toBe(handle.id);
    const select = control<HTMLSelectElement>(root, "log-select");
    expect(select.value).toBe(handle.id);
    expect(Array.from(select.options).some((o) => o.text.includes("second.csv"))).toBe(true);
    expect(root.querySelector("#chart-inner svg")).not.toBeNull();
  });

  it("shows a banner naming the offending field on a 422 and keeps the chart", async () => {
    const { app, root } = await bootApp();
    const svgBefore = root.querySelector("#chart-inner")!.innerHTML;
    setSelect(root, "sort-by", "first-operation");
    // sabotage the draft beyond what the controls allow
    const select = control<HTMLSelectElement>(root, "sort-by");
    const rogue = document.createElement("option");
    rogue.value = "sideways";
    select.add(rogue);
    select.value = "sideways";
    clickUpdate(root);
    await settle();
    const banner = control<HTMLDivElement>(root, "banner");
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("sort-by");
    expect(root.querySelector("#chart-inner")!.innerHTML).toBe(svgBefore);
    expect(app.state.applied!["sort-by"]).toBe("distance-from-start");
  });

  it("keeps the last chart on network failure", async () => {
    const flaky = new Client(baseUrl(), (input, init) => {
      const url = String(input);
      if (/\/chart$/.test(url) && failNext) {
        failNext = false;
        return Promise.reject(new TypeError("connection refused"));
      }
      return fetch(input as RequestInfo, init);
    });
    let failNext = false;
    const probe = new Client(baseUrl());
    const uploaded = await probe.uploadLog(SAMPLE_CSV, "flaky.csv", "csv");
    const root = document.createElement("div");
    document.body.replaceChildren(root);
    const app = await initApp(root, flaky);
    await app.selectLog(uploaded.id);
    const before = root.querySelector("#chart-inner")!.innerHTML;
    expect(before).toContain("svg");
    failNext = true;
    await app.update();
    expect(root.querySelector("#chart-inner")!.innerHTML).toBe(before);
    expect(control<HTMLDivElement>(root, "banner").hidden).toBe(false);
    expect(control<HTMLDivElement>(root, "banner").textContent).toContain("network");
  });

  it("discards stale responses; the latest request wins", async () => {
    let gateEnabled = false;
    const gates: Array<() => void> = [];
    const gated = new Client(baseUrl(), async (input, init) => {
      const url = String(input);
      if (gateEnabled && /\/chart$/.test(url)) {
        await new Promise<void>((resolve) => gates.push(resolve));
      }
      return fetch(input as RequestInfo, init);
    });
    const probe = new Client(baseUrl());
    const uploaded = await probe.uploadLog(SAMPLE_CSV, "stale.csv", "csv");
    const root = document.createElement("div");
    document.body.replaceChildren(root);
    const app = await initApp(root, gated); // boot-time requests run ungated
    await app.selectLog(uploaded.id);

    gateEnabled = true;
    setSelect(root, "color-by", "operation");
    const first = app.update(); // request A
    setSelect(root, "color-by", "none");
    const second = app.update(); // request B supersedes A
    await settle();
    expect(gates.length).toBe(2);
    gates[1]!(); // B lands first
    await second;
    const after = app.state.applied!["color-by"];
    gates[0]!(); // A lands late and must be discarded
    await first;
    await settle();
    expect(after).toBe("none");
    expect(app.state.applied!["color-by"]).toBe("none");
  });
});
