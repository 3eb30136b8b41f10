// Client-side handling of #state= snapshot fragments. The payload is
// decoded locally only to preview file names; execution policy rests on
// the engine's trust verdict, and anything short of signed-valid never
// auto-runs.

export interface FragmentParts {
  payload: string
  sig: string | null
}

export function parseFragment(hash: string): FragmentParts | null {
  const at = hash.indexOf('state=')
  if (at < 0) return null
  let payload = hash.slice(at + 'state='.length)
  let sig: string | null = null
  const sigAt = payload.indexOf('&sig=')
  if (sigAt >= 0) {
    sig = payload.slice(sigAt + '&sig='.length).split('&')[0]
    payload = payload.slice(0, sigAt)
  }
  return payload ? { payload, sig } : null
}

export function decodePayload(payloadB64: string): unknown | null {
  try {
    const padded = payloadB64.replace(/-/g, '+').replace(/_/g, '/')
    const binary = atob(padded + '='.repeat((4 - (padded.length % 4)) % 4))
    const bytes = Uint8Array.from(binary, (c) => c.charCodeAt(0))
    return JSON.parse(new TextDecoder().decode(bytes))
  } catch {
    return null
  }
}

/** Auto-replay is permitted only for a server-verified signature. */
export function shouldAutoExecute(trust: string | null): boolean {
  return trust === 'signed-valid'
}
