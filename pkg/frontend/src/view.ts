// DOM rendering. The state lives in model.ts; this module only projects it
// onto the page and forwards user gestures as messages.

import { gridCoords } from './grid.js'
import { spanToRange } from './highlight.js'
import { activeSource, bubbleRows, UiState } from './model.js'
import type { TurtleCommand } from './protocol.js'

export interface ViewHooks {
  onCommand(op: 'step' | 'animate' | 'run' | 'stop'): void
  onRepl(text: string): void
  onInputLine(text: string): void
  onEditorChange(name: string, content: string): void
  onSelectTab(name: string): void
  onMouse(x: number, y: number, button: number, ev: MouseEvent): void
  onSnapshot(): void
}

const esc = (s: string) =>
  s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')

export class View {
  private root: HTMLElement
  private hooks: ViewHooks
  private editor!: HTMLTextAreaElement
  private editorBack!: HTMLElement
  private tabs!: HTMLElement
  private counter!: HTMLElement
  private consoleLog!: HTMLElement
  private replInput!: HTMLInputElement
  private bubble!: HTMLElement
  private banner!: HTMLElement
  private canvas!: HTMLCanvasElement
  private status!: HTMLElement
  private showAllScopes = false

  constructor(root: HTMLElement, hooks: ViewHooks) {
    this.root = root
    this.hooks = hooks
    this.build()
  }

  private build(): void {
    this.root.innerHTML = `
      <header>
        <span class="title">stepboot</span>
        <span id="status" class="status">disconnected</span>
        <span class="spacer"></span>
        <button id="btn-step" title="single step">step</button>
        <button id="btn-animate" title="timed steps">animate</button>
        <button id="btn-run" title="run to the end">run</button>
        <button id="btn-stop" title="stop">stop</button>
        <span id="counter" class="counter">0 steps</span>
        <button id="btn-snapshot" title="snapshot link">link</button>
      </header>
      <div id="banner" class="banner" hidden></div>
      <main>
        <section class="editor-pane">
          <nav id="tabs"></nav>
          <div class="editor-stack">
            <pre id="editor-back" aria-hidden="true"></pre>
            <textarea id="editor" spellcheck="false"></textarea>
          </div>
          <div id="bubble" class="bubble" hidden></div>
        </section>
        <section class="io-pane">
          <div id="console" class="console"></div>
          <div class="repl-row">
            <span class="prompt">&gt;&gt;&gt;</span>
            <input id="repl" autocomplete="off" />
          </div>
          <canvas id="playground" width="320" height="320"></canvas>
        </section>
      </main>`
    this.editor = this.root.querySelector('#editor')!
    this.editorBack = this.root.querySelector('#editor-back')!
    this.tabs = this.root.querySelector('#tabs')!
    this.counter = this.root.querySelector('#counter')!
    this.consoleLog = this.root.querySelector('#console')!
    this.replInput = this.root.querySelector('#repl')!
    this.bubble = this.root.querySelector('#bubble')!
    this.banner = this.root.querySelector('#banner')!
    this.canvas = this.root.querySelector('#playground')!
    this.status = this.root.querySelector('#status')!

    const btn = (id: string) => this.root.querySelector<HTMLButtonElement>(id)!
    btn('#btn-step').onclick = () => this.hooks.onCommand('step')
    btn('#btn-animate').onclick = () => this.hooks.onCommand('animate')
    btn('#btn-run').onclick = () => this.hooks.onCommand('run')
    btn('#btn-stop').onclick = () => this.hooks.onCommand('stop')
    btn('#btn-snapshot').onclick = () => this.hooks.onSnapshot()

    this.replInput.onkeydown = (ev) => {
      if (ev.key === 'Enter' && this.replInput.value.trim()) {
        this.hooks.onRepl(this.replInput.value)
        this.replInput.value = ''
      }
    }
    this.editor.oninput = () => {
      const tab = this.tabs.querySelector('.active')?.textContent
      if (tab) this.hooks.onEditorChange(tab, this.editor.value)
      this.editorBack.textContent = this.editor.value
    }
    this.editor.onscroll = () => {
      this.editorBack.scrollTop = this.editor.scrollTop
      this.editorBack.scrollLeft = this.editor.scrollLeft
    }
    const forward = (ev: MouseEvent, button: number) => {
      const rect = this.canvas.getBoundingClientRect()
      this.hooks.onMouse(ev.clientX - rect.left, ev.clientY - rect.top, button, ev)
    }
    this.canvas.onmousemove = (ev) => forward(ev, 0)
    this.canvas.onmousedown = (ev) => forward(ev, ev.button + 1)
    this.canvas.onmouseup = (ev) => forward(ev, 0)
  }

  /** Convert a canvas-relative point to grid coordinates, if a grid exists. */
  toGrid(state: UiState, px: number, py: number): { x: number; y: number } | null {
    if (!state.grid) return null
    return gridCoords(px, py, { w: this.canvas.width, h: this.canvas.height }, state.grid)
  }

  render(state: UiState): void {
    this.status.textContent = state.banner ? 'snapshot' : 'session'
    this.counter.textContent = `${state.stepCount} step${state.stepCount === 1 ? '' : 's'}`

    this.banner.hidden = state.banner === null
    this.banner.textContent = state.banner ?? ''

    this.renderTabs(state)
    this.renderEditor(state)
    this.renderBubble(state)
    this.renderConsole(state)
    this.renderPlayground(state)

    this.replInput.placeholder = state.needInput !== null
      ? state.needInput || 'input requested'
      : ''
  }

  setConnected(connected: boolean): void {
    this.status.textContent = connected ? 'session' : 'disconnected'
  }

  private renderTabs(state: UiState): void {
    this.tabs.innerHTML = ''
    for (const file of state.files) {
      const tab = document.createElement('button')
      tab.textContent = file.n
      tab.className = file.n === state.activeTab ? 'active' : ''
      tab.onclick = () => this.hooks.onSelectTab(file.n)
      this.tabs.appendChild(tab)
    }
  }

  private renderEditor(state: UiState): void {
    const source = activeSource(state)
    if (this.editor.value !== source) this.editor.value = source
    const step = state.currentStep
    if (step && step.file === state.activeTab) {
      const range = spanToRange(source, step.span)
      if (range) {
        this.editorBack.innerHTML =
          esc(source.slice(0, range.start)) +
          `<mark class="${step.kind}">` +
          esc(source.slice(range.start, range.end)) +
          '</mark>' +
          esc(source.slice(range.end))
        return
      }
    }
    this.editorBack.textContent = source
  }

  private renderBubble(state: UiState): void {
    const step = state.currentStep
    if (!step) {
      this.bubble.hidden = true
      return
    }
    this.bubble.hidden = false
    const rows = bubbleRows(step, this.showAllScopes)
    const parts: string[] = [
      `<div class="bubble-head">step ${step.count} · ${step.kind}</div>`,
    ]
    if (step.assign) {
      parts.push(
        `<div class="bubble-assign">${esc(step.assign.target)} ← ${esc(step.assign.value)}</div>`,
      )
    }
    for (const row of rows) {
      const vars = row.vars.length
        ? row.vars.map(([n, v]) => `${esc(n)} = ${esc(v)}`).join('<br>')
        : '(no variables)'
      parts.push(`<div class="bubble-scope"><b>${row.label}</b><br>${vars}</div>`)
    }
    parts.push(
      `<button id="bubble-toggle">${this.showAllScopes ? 'compact' : 'all scopes'}</button>`,
    )
    this.bubble.innerHTML = parts.join('')
    this.bubble.querySelector<HTMLButtonElement>('#bubble-toggle')!.onclick = () => {
      this.showAllScopes = !this.showAllScopes
      this.render(state)
    }
  }

  private renderConsole(state: UiState): void {
    this.consoleLog.innerHTML = state.console
      .map((line) => `<div class="line ${line.kind}">${esc(line.text)}</div>`)
      .join('')
    this.consoleLog.scrollTop = this.consoleLog.scrollHeight
  }

  private renderPlayground(state: UiState): void {
    const ctx = this.canvas.getContext('2d')
    if (!ctx) return
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height)
    if (state.grid) {
      const cellW = this.canvas.width / state.grid.width
      const cellH = this.canvas.height / state.grid.height
      for (let y = 0; y < state.grid.height; y++) {
        for (let x = 0; x < state.grid.width; x++) {
          const color = state.grid.get(x, y)
          if (color) {
            ctx.fillStyle = color
            ctx.fillRect(x * cellW, y * cellH, Math.ceil(cellW), Math.ceil(cellH))
          }
        }
      }
      return
    }
    if (state.turtle.length) {
      // turtle coordinates are math-style (origin center, y up)
      const ox = this.canvas.width / 2
      const oy = this.canvas.height / 2
      ctx.strokeStyle = '#023'
      ctx.lineWidth = 2
      ctx.beginPath()
      for (const command of state.turtle as TurtleCommand[]) {
        if (command.op === 'line') {
          ctx.moveTo(ox + command.x1, oy - command.y1)
          ctx.lineTo(ox + command.x2, oy - command.y2)
        }
      }
      ctx.stroke()
    }
  }
}
