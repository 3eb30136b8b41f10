// WebSocket connection to the engine's /session endpoint.

import type { ClientMessage, EngineEvent } from './protocol.js'

type DistributiveOmit<T, K extends PropertyKey> = T extends unknown ? Omit<T, K> : never

/** A client message before its id is assigned. */
export type Outgoing = DistributiveOmit<ClientMessage, 'id'>

export class EngineConnection {
  private ws: WebSocket | null = null
  private nextId = 1
  onEvent: (event: EngineEvent) => void = () => {}
  onStatus: (connected: boolean) => void = () => {}

  connect(url?: string): void {
    const target =
      url ??
      `${location.protocol === 'https:' ? 'wss' : 'ws'}://${location.host}/session`
    this.ws = new WebSocket(target)
    this.ws.onopen = () => this.onStatus(true)
    this.ws.onclose = () => this.onStatus(false)
    this.ws.onmessage = (msg) => {
      try {
        this.onEvent(JSON.parse(msg.data as string) as EngineEvent)
      } catch {
        // a malformed frame is dropped; the engine resends nothing
      }
    }
  }

  send(message: Outgoing): number {
    const id = this.nextId++
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify({ id, ...message }))
    }
    return id
  }
}
