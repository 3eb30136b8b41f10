// Wire format shared with the engine: JSON messages out, events in.

export interface Span {
  file: string
  sl: number // 1-based start line
  sc: number // 0-based start column, in code points
  el: number
  ec: number
}

export interface FileEntry {
  n: string
  c: string
}

export interface StepEventPayload {
  ev: 'step'
  count: number
  file: string
  span: Span
  kind: 'ExprEnd' | 'StmtDone' | 'AssignDone'
  scopes: [string, string][][] // innermost first
  assign: { target: string; value: string } | null
  id?: number | string
}

export type EngineEvent =
  | StepEventPayload
  | { ev: 'stdout'; text: string; id?: number | string }
  | { ev: 'result'; repr: string | null; id?: number | string }
  | {
      ev: 'error'
      type: string
      message: string
      span: Span | null
      traceback: { file: string; line: number; where: string | null }[]
      id?: number | string
    }
  | { ev: 'done'; steps: number; id?: number | string }
  | { ev: 'screen'; w: number; h: number; id?: number | string }
  | { ev: 'pixels'; batch: [number, number, string][]; id?: number | string }
  | { ev: 'turtle'; commands: TurtleCommand[]; id?: number | string }
  | { ev: 'need_input'; prompt: string; id?: number | string }
  | { ev: 'snapshot'; url: string; oversize: boolean; id?: number | string }
  | { ev: 'state'; files: FileEntry[]; repl_history: string[]; id?: number | string }
  | { ev: 'trust'; trust: string; id?: number | string }
  | { ev: 'ok'; op: string; id?: number | string }

export type TurtleCommand =
  | { op: 'line'; x1: number; y1: number; x2: number; y2: number }
  | { op: 'move'; x1: number; y1: number; x2: number; y2: number }
  | { op: 'clear' }

export type ClientMessage =
  | { id: number; op: 'load_files'; files: FileEntry[] }
  | { id: number; op: 'file_upload'; n: string; c: string }
  | { id: number; op: 'repl'; input: string }
  | { id: number; op: 'step'; n: number }
  | { id: number; op: 'animate'; ms: number }
  | { id: number; op: 'run' }
  | { id: number; op: 'stop' }
  | { id: number; op: 'reset' }
  | {
      id: number
      op: 'mouse_state'
      x: number
      y: number
      button: number
      shift: boolean
      ctrl: boolean
      alt: boolean
    }
  | { id: number; op: 'input_line'; text: string }
  | { id: number; op: 'snapshot'; base: string; signed: boolean }
  | { id: number; op: 'restore'; url: string }
