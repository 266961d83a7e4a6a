/** Pan/zoom viewport over the fetched SVG.
 *
 * Zooming and panning are pure CSS transforms of the server-rendered bytes;
 * nothing is re-fetched and no geometry is recomputed.  The inverse mapping
 * turns screen pixels back into chart pixels for server-side hit tests.
 */

export class Viewport {
  zoomX = 1;
  zoomY = 1;
  panX = 0;
  panY = 0;

  constructor(
    readonly frame: HTMLElement,
    readonly inner: HTMLElement,
  ) {
    inner.style.transformOrigin = "0 0";
  }

  apply(): void {
    this.inner.style.transform =
      `translate(${this.panX}px, ${this.panY}px) scale(${this.zoomX}, ${this.zoomY})`;
  }

  reset(): void {
    this.zoomX = 1;
    this.zoomY = 1;
    this.panX = 0;
    this.panY = 0;
    this.apply();
  }

  setZoom(zoomX: number, zoomY: number): void {
    if (zoomX <= 0 || zoomY <= 0) throw new Error("zoom factors must be positive");
    this.zoomX = zoomX;
    this.zoomY = zoomY;
    this.apply();
  }

  panBy(dx: number, dy: number): void {
    this.panX += dx;
    this.panY += dy;
    this.apply();
  }

  /** Screen (client) coordinates -> chart pixel coordinates. */
  toChart(clientX: number, clientY: number): { x: number; y: number } {
    const rect = this.frame.getBoundingClientRect();
    return {
      x: (clientX - rect.left - this.panX) / this.zoomX,
      y: (clientY - rect.top - this.panY) / this.zoomY,
    };
  }

  /** Zoom so the given chart-coordinate rectangle fills the frame. */
  zoomToRect(x0: number, y0: number, x1: number, y1: number): void {
    const w = Math.abs(x1 - x0);
    const h = Math.abs(y1 - y0);
    if (w < 1 || h < 1) return; // ignore degenerate selections
    const frameW = this.frame.clientWidth || 1000;
    const frameH = this.frame.clientHeight || 600;
    this.zoomX = frameW / w;
    this.zoomY = frameH / h;
    this.panX = -Math.min(x0, x1) * this.zoomX;
    this.panY = -Math.min(y0, y1) * this.zoomY;
    this.apply();
  }
}

/** Slider position in [-100, 100] -> zoom factor on a log10 scale (0.01x..100x). */
export function sliderToZoom(position: number): number {
  return Math.pow(10, position / 50);
}

export function zoomToSlider(zoom: number): number {
  return Math.round(50 * Math.log10(zoom));
}
