import { EngineConnection } from './client.js'
import { applyEvent, initialState, UiState } from './model.js'
import { parseFragment } from './snapshot.js'
import { View } from './view.js'

const DEFAULT_PROGRAM = `# welcome to stepboot
total = 0
for i in range(5):
    total = total + i * i
print("total:", total)
`

let state: UiState = initialState()
const connection = new EngineConnection()

const view = new View(document.getElementById('app')!, {
  onCommand(op) {
    if (op === 'step') connection.send({ op: 'step', n: 1 })
    else if (op === 'animate') connection.send({ op: 'animate', ms: 300 })
    else if (op === 'run') connection.send({ op: 'run' })
    else connection.send({ op: 'stop' })
  },
  onRepl(text) {
    if (state.needInput !== null) {
      connection.send({ op: 'input_line', text })
      state = { ...state, needInput: null }
    } else {
      state = applyEvent(state, { ev: 'stdout', text: '>>> ' + text + '\n' })
      connection.send({ op: 'repl', input: text })
    }
    view.render(state)
  },
  onInputLine(text) {
    connection.send({ op: 'input_line', text })
  },
  onEditorChange(name, content) {
    state = {
      ...state,
      files: state.files.map((f) => (f.n === name ? { n: name, c: content } : f)),
    }
    connection.send({ op: 'file_upload', n: name, c: content })
  },
  onSelectTab(name) {
    state = { ...state, activeTab: name }
    view.render(state)
  },
  onMouse(px, py, button, ev) {
    const cell = view.toGrid(state, px, py)
    if (cell) {
      connection.send({
        op: 'mouse_state',
        x: cell.x,
        y: cell.y,
        button,
        shift: ev.shiftKey,
        ctrl: ev.ctrlKey,
        alt: ev.altKey,
      })
    }
  },
  onSnapshot() {
    const base = location.origin + location.pathname
    connection.send({ op: 'snapshot', base, signed: false })
  },
})

connection.onEvent = (event) => {
  state = applyEvent(state, event)
  view.render(state)
}
connection.onStatus = (connected) => {
  view.setConnected(connected)
  if (!connected) return
  const fragment = parseFragment(location.hash)
  if (fragment) {
    connection.send({ op: 'restore', url: location.href })
  } else {
    connection.send({
      op: 'load_files',
      files: [{ n: 'main.py', c: DEFAULT_PROGRAM }],
    })
  }
}

connection.connect()
view.render(state)
