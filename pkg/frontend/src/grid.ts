// Simulated-screen pixel buffer. Origin is the top-left cell, y grows
// downward; cells hold '#rrggbb' strings or null when never painted.

export class PixelGrid {
  readonly width: number
  readonly height: number
  readonly cells: (string | null)[]

  constructor(width: number, height: number) {
    this.width = width
    this.height = height
    this.cells = new Array(width * height).fill(null)
  }

  set(x: number, y: number, color: string): void {
    if (x >= 0 && x < this.width && y >= 0 && y < this.height) {
      this.cells[y * this.width + x] = color
    }
  }

  get(x: number, y: number): string | null {
    return this.cells[y * this.width + x]
  }

  applyBatch(batch: [number, number, string][]): void {
    for (const [x, y, color] of batch) this.set(x, y, color)
  }

  /** Flat snapshot for golden comparisons. */
  toArray(): (string | null)[] {
    return this.cells.slice()
  }
}

/** Canvas-relative pointer position to grid cell coordinates. */
export function gridCoords(
  px: number,
  py: number,
  canvasSize: { w: number; h: number },
  grid: { width: number; height: number },
): { x: number; y: number } {
  const cellW = canvasSize.w / grid.width
  const cellH = canvasSize.h / grid.height
  const x = Math.min(grid.width - 1, Math.max(0, Math.floor(px / cellW)))
  const y = Math.min(grid.height - 1, Math.max(0, Math.floor(py / cellH)))
  return { x, y }
}
