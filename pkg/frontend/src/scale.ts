// Display scaling only: affine maps from API numbers to pixels and opacity.
// All confidence math lives on the server.

export const MIN_UNDERLINE_OPACITY = 0.15;

export const underlineOpacity = (confidence: number): number =>
  0.15 + 0.85 * confidence;

export const MIN_FONT_PX = 12;
export const MAX_FONT_PX = 32;

// Linear in occurrence count, anchored at the root's count, clamped so a
// 200-hit keyword stays readable.
export const fontSizeFor = (count: number, rootCount: number): number => {
  const span = Math.max(rootCount - 1, 1);
  const size = MIN_FONT_PX + (MAX_FONT_PX - MIN_FONT_PX) * ((count - 1) / span);
  return Math.min(Math.max(size, MIN_FONT_PX), MAX_FONT_PX);
};

// Fixed colorblind-safe palette (Tol muted), indexed by speaker color_index.
export const SPEAKER_PALETTE = [
  '#332288',
  '#117733',
  '#44AA99',
  '#88CCEE',
  '#DDCC77',
  '#CC6677',
  '#AA4499',
  '#882255',
  '#999933',
  '#DDDDDD',
] as const;

export const speakerColor = (colorIndex: number): string =>
  SPEAKER_PALETTE[colorIndex % SPEAKER_PALETTE.length];

export const HIT_YELLOW = '#ffeb3b';
