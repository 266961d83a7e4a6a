/** Shared helpers: a counting fetch wrapper and a sample session log. */

import { inject } from "vitest";

import { Client, type FetchFn } from "../src/api.js";
import { initApp, type AppHandle } from "../src/app.js";

export function baseUrl(): string {
  return inject("serviceBaseUrl");
}

export interface CountingFetch {
  fetchFn: FetchFn;
  calls: { url: string; method: string; body?: string }[];
  chartRequests(): number;
}

export function countingFetch(): CountingFetch {
  const calls: CountingFetch["calls"] = [];
  const fetchFn: FetchFn = (input, init) => {
    const url = typeof input === "string" ? input : input instanceof URL ? input.href : input.url;
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? init.body : undefined,
    });
    return fetch(input as RequestInfo, init);
  };
  return {
    fetchFn,
    calls,
    chartRequests: () => calls.filter((c) => c.method === "POST" && /\/chart$/.test(c.url)).length,
  };
}

/** A small but interesting session: start, two activities, gateway pair,
 * edges, one move, one rename, one deleted extra element. */
export const SAMPLE_CSV = [
  "element_id,name,timestamp_ms,x,y,source,target,label",
  "s0,CREATE_START_EVENT,1000,0,0,,,",
  "a1,CREATE_ACTIVITY,5000,120,0,,,",
  "g1,CREATE_XOR,9000,240,0,,,",
  "g2,CREATE_XOR,13000,360,0,,,",
  "a2,CREATE_ACTIVITY,17000,480,0,,,",
  "e0,CREATE_END_EVENT,21000,600,0,,,",
  "ed1,CREATE_EDGE,25000,,,s0,a1,",
  "ed2,CREATE_EDGE,29000,,,a1,g1,",
  "ed3,CREATE_EDGE,33000,,,g1,g2,",
  "ed4,CREATE_EDGE,37000,,,g2,a2,",
  "ed5,CREATE_EDGE,41000,,,a2,e0,",
  "a1,MOVE_ACTIVITY,45000,130,10,,,",
  "a1,NAME_ACTIVITY,49000,,,,,Check form",
  "x0,CREATE_ACTIVITY,53000,700,0,,,",
  "x0,DELETE_ACTIVITY,57000,,,,,",
  "",
].join("\n");

export interface TestApp {
  app: AppHandle;
  client: Client;
  counter: CountingFetch;
  root: HTMLElement;
  logId: string;
}

/** Fresh app instance with one uploaded sample log selected. */
export async function bootApp(csv: string = SAMPLE_CSV): Promise<TestApp> {
  const counter = countingFetch();
  const client = new Client(baseUrl(), counter.fetchFn);
  const uploaded = await new Client(baseUrl()).uploadLog(csv, `sample-${Date.now()}.csv`, "csv");
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  const app = await initApp(root, client);
  await app.selectLog(uploaded.id);
  return { app, client, counter, root, logId: uploaded.id };
}

export function control<T extends HTMLElement>(root: HTMLElement, id: string): T {
  const node = root.querySelector<T>(`#${id}`);
  if (node === null) throw new Error(`missing control #${id}`);
  return node;
}

export function setSelect(root: HTMLElement, id: string, value: string): void {
  const select = control<HTMLSelectElement>(root, id);
  select.value = value;
  select.dispatchEvent(new Event("change", { bubbles: true }));
}

export function clickUpdate(root: HTMLElement): void {
  control<HTMLButtonElement>(root, "update-btn").click();
}

export async function settle(): Promise<void> {
  // let queued promise callbacks (fetch handlers, DOM updates) drain
  for (let i = 0; i < 20; i++) {
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}

export function mouse(
  target: EventTarget,
  type: string,
  clientX: number,
  clientY: number,
  extra: MouseEventInit = {},
): void {
  target.dispatchEvent(
    new MouseEvent(type, { clientX, clientY, bubbles: true, cancelable: true, ...extra }),
  );
}
