// Span-to-offset conversion. Engine columns count Unicode code points;
// JavaScript string indices count UTF-16 units, so surrogate pairs must be
// walked explicitly.

import type { Span } from './protocol.js'

export interface Range {
  start: number // UTF-16 offset, inclusive
  end: number // exclusive
}

function lineStarts(text: string): number[] {
  const starts = [0]
  for (let i = 0; i < text.length; i++) {
    if (text[i] === '\n') starts.push(i + 1)
  }
  return starts
}

/** UTF-16 offset of `codePoints` code points past `base`. */
function advance(text: string, base: number, codePoints: number): number {
  let i = base
  let seen = 0
  while (seen < codePoints && i < text.length) {
    const code = text.codePointAt(i)!
    i += code > 0xffff ? 2 : 1
    seen += 1
  }
  return i
}

/** The editor range covered by a span, or null when it falls outside. */
export function spanToRange(text: string, span: Span): Range | null {
  const starts = lineStarts(text)
  if (span.sl < 1 || span.sl > starts.length || span.el < 1 || span.el > starts.length + 1) {
    return null
  }
  const start = advance(text, starts[span.sl - 1], span.sc)
  const endBase = span.el - 1 < starts.length ? starts[span.el - 1] : text.length
  const end = advance(text, endBase, span.ec)
  if (start > text.length || end > text.length || end < start) return null
  return { start, end }
}

/** Highlighted slice of the text, for tests and tooltips. */
export function spanText(text: string, span: Span): string {
  const range = spanToRange(text, span)
  return range ? text.slice(range.start, range.end) : ''
}
