// UI state as a pure function of the engine-event stream: applyEvent
// returns a new state, so replaying a recorded transcript reproduces the
// exact highlight ranges, counter values and playground contents.

import { PixelGrid } from './grid.js'
import type { EngineEvent, FileEntry, StepEventPayload, TurtleCommand } from './protocol.js'

export interface ConsoleLine {
  kind: 'stdout' | 'result' | 'error' | 'info' | 'echo'
  text: string
}

export interface UiState {
  files: FileEntry[]
  activeTab: string | null
  replHistory: string[]
  console: ConsoleLine[]
  currentStep: StepEventPayload | null
  stepCount: number
  running: boolean
  needInput: string | null
  grid: PixelGrid | null
  turtle: TurtleCommand[]
  trust: string | null
  banner: string | null
  lastSnapshotUrl: string | null
}

export function initialState(): UiState {
  return {
    files: [],
    activeTab: null,
    replHistory: [],
    console: [],
    currentStep: null,
    stepCount: 0,
    running: false,
    needInput: null,
    grid: null,
    turtle: [],
    trust: null,
    banner: null,
    lastSnapshotUrl: null,
  }
}

function push(state: UiState, line: ConsoleLine): UiState {
  return { ...state, console: [...state.console, line] }
}

export function applyEvent(state: UiState, event: EngineEvent): UiState {
  switch (event.ev) {
    case 'state': {
      const activeTab = event.files.length ? event.files[0].n : null
      return { ...state, files: event.files, activeTab, replHistory: event.repl_history }
    }
    case 'step':
      return {
        ...state,
        currentStep: event,
        stepCount: event.count,
        running: false,
        needInput: null,
      }
    case 'stdout':
      return push(state, { kind: 'stdout', text: event.text })
    case 'result':
      return event.repr === null
        ? state
        : push(state, { kind: 'result', text: event.repr })
    case 'error':
      return push(
        { ...state, running: false },
        { kind: 'error', text: `${event.type}: ${event.message}` },
      )
    case 'done':
      return push(
        { ...state, stepCount: event.steps, currentStep: null, running: false },
        { kind: 'info', text: `done in ${event.steps} steps` },
      )
    case 'screen':
      return { ...state, grid: new PixelGrid(event.w, event.h) }
    case 'pixels': {
      if (!state.grid) return state
      const grid = new PixelGrid(state.grid.width, state.grid.height)
      grid.cells.splice(0, grid.cells.length, ...state.grid.cells)
      grid.applyBatch(event.batch)
      return { ...state, grid }
    }
    case 'turtle': {
      let turtle = state.turtle
      for (const command of event.commands) {
        turtle = command.op === 'clear' ? [] : [...turtle, command]
      }
      return { ...state, turtle }
    }
    case 'need_input':
      return { ...state, needInput: event.prompt, running: false }
    case 'snapshot':
      return push(
        { ...state, lastSnapshotUrl: event.url },
        { kind: 'info', text: event.url },
      )
    case 'trust': {
      const banner =
        event.trust === 'signed-valid'
          ? null
          : 'snapshot is not signed by this server: run manually'
      return { ...state, trust: event.trust, banner }
    }
    case 'ok':
      return state
  }
}

export function replay(events: EngineEvent[], start?: UiState): UiState {
  let state = start ?? initialState()
  for (const event of events) state = applyEvent(state, event)
  return state
}

export function activeSource(state: UiState): string {
  const file = state.files.find((f) => f.n === state.activeTab)
  return file ? file.c : ''
}

/** Bubble rows for display: innermost scope first; compact by default. */
export function bubbleRows(
  step: StepEventPayload,
  showAllScopes: boolean,
): { label: string; vars: [string, string][] }[] {
  const scopes = showAllScopes ? step.scopes : step.scopes.slice(0, 1)
  return scopes.map((vars, i) => ({
    label: i === 0 ? 'in scope' : i === step.scopes.length - 1 ? 'globals' : 'enclosing',
    vars,
  }))
}
