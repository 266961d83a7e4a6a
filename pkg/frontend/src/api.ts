/** Typed client for the chart service; the UI's only data source. */

export interface LogHandle {
  id: string;
  name: string;
  "trace-count": number;
  "event-count": number;
  "uploaded-at": string;
}

export interface LegendRow {
  name: string;
  element: string;
  category: string;
  shape: string;
  rgb: [number, number, number];
  hex: string;
}

export interface HitDot {
  "element-id": string;
  operation: string;
  "t-actual": number;
  x: number;
  y: number;
}

export interface StyleOverride {
  color: string | [number, number, number];
  shape: string;
}

export interface FiltersJson {
  "hide-element-kinds": string[];
  "hide-operation-kinds": string[];
  "hide-elements-with-operation": string[];
}

export interface ChartConfigJson {
  "time-option": string;
  "time-interval": string;
  "color-by": string;
  "shape-by": string;
  "sort-by": string;
  descending: boolean;
  "window-ms": number;
  filters: FiltersJson;
  "style-overrides": Record<string, StyleOverride>;
}

export interface RenderJson {
  width?: number;
  height?: number;
  "dot-size"?: number;
  "show-labels"?: boolean;
  "show-legend"?: boolean;
  "zoom-x"?: number;
  "zoom-y"?: number;
}

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly field?: string,
  ) {
    super(message);
  }
}

async function fail(resp: Response): Promise<never> {
  let code = "http-error";
  let message = `${resp.status} ${resp.statusText}`;
  let field: string | undefined;
  try {
    const body = await resp.json();
    if (body && typeof body === "object") {
      code = body.code ?? code;
      message = body.message ?? message;
      field = body.field;
    }
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(resp.status, code, message, field);
}

export type FetchFn = typeof fetch;

export class Client {
  constructor(
    readonly baseUrl: string = "",
    readonly fetchFn: FetchFn = (...args) => fetch(...args),
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) await fail(resp);
    return (await resp.json()) as T;
  }

  listLogs(): Promise<LogHandle[]> {
    return this.json("/api/logs");
  }

  uploadLog(content: string | Blob, name: string, format?: string): Promise<LogHandle> {
    const params = new URLSearchParams({ name });
    if (format) params.set("format", format);
    return this.json(`/api/logs?${params}`, { method: "POST", body: content });
  }

  legend(): Promise<LegendRow[]> {
    return this.json("/api/legend");
  }

  validate(logId: string): Promise<unknown[]> {
    return this.json(`/api/logs/${logId}/validate`);
  }

  /** Fetch the rendered chart; geometry is entirely server-side. */
  async chartSvg(
    logId: string,
    config: ChartConfigJson,
    render?: RenderJson,
  ): Promise<{ svg: string; notices: string[] }> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/logs/${logId}/chart`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ config, render: render ?? {} }),
    });
    if (!resp.ok) await fail(resp);
    const notices = JSON.parse(resp.headers.get("X-Chart-Notices") ?? "[]") as string[];
    return { svg: await resp.text(), notices };
  }

  hitTest(
    logId: string,
    config: ChartConfigJson,
    rect: Rect,
    render?: RenderJson,
  ): Promise<HitDot[]> {
    return this.json(`/api/logs/${logId}/hit-test`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ config, render: render ?? {}, rect }),
    });
  }
}
