import type { Overview, Rect } from './api.js';

export interface OverviewCallbacks {
  onRectClick?: (rect: Rect) => void;
}

export const DEFAULT_VIEWPORT = 840;

/**
 * The whole-recording confidence strip: one rectangle per segment, width
 * proportional to duration, fill opacity straight from the API payload.
 */
export class OverviewView {
  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: OverviewCallbacks = {},
  ) {
    this.container.classList.add('overview');
  }

  /** Pixel width the geometry should be requested for. */
  viewport(): number {
    return this.container.clientWidth || DEFAULT_VIEWPORT;
  }

  render(overview: Overview): void {
    this.container.textContent = '';
    this.container.dataset.revision = String(overview.revision);
    for (const rect of overview.rects) {
      const el = document.createElement('div');
      el.className = 'overview-rect';
      el.dataset.segment = String(rect.segment_index);
      el.style.left = `${rect.x}px`;
      el.style.width = `${rect.width}px`;
      el.style.opacity = String(rect.opacity);
      el.title =
        `line ${rect.tooltip.line} · ` +
        `mean ${rect.tooltip.mean_confidence.toFixed(3)} · ` +
        rect.tooltip.text;
      el.addEventListener('click', () => this.callbacks.onRectClick?.(rect));
      this.container.appendChild(el);
    }
  }
}
