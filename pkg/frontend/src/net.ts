// WebSocket client with auto-reconnect. Each user action sends exactly one
// protocol message; replies and snapshots come back through the callbacks.

import type { ClientMessage, ServerMessage } from "./protocol";
import { parseServerMessage, SeqTracker } from "./protocol";

export interface ClientCallbacks {
  onMessage(msg: ServerMessage): void;
  onConnection(up: boolean): void;
  onProtocolError(detail: string): void;
}

const RETRY_BASE_MS = 500;
const RETRY_MAX_MS = 5000;

export class ConsoleClient {
  private ws: WebSocket | null = null;
  private readonly seq = new SeqTracker();
  private retryMs = RETRY_BASE_MS;
  private closed = false;

  constructor(
    private readonly url: string,
    private readonly callbacks: ClientCallbacks,
  ) {}

  connect(): void {
    if (this.closed) return;
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.retryMs = RETRY_BASE_MS;
      this.seq.reset();
      this.callbacks.onConnection(true);
    };
    ws.onmessage = (event) => {
      let msg: ServerMessage;
      try {
        msg = parseServerMessage(String(event.data));
      } catch (err) {
        this.callbacks.onProtocolError(String(err));
        return;
      }
      if (!this.seq.accept(msg.seq)) {
        this.callbacks.onProtocolError(`sequence went backwards at ${msg.seq}`);
        return;
      }
      this.callbacks.onMessage(msg);
    };
    ws.onclose = () => {
      this.ws = null;
      this.callbacks.onConnection(false);
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, RETRY_MAX_MS);
      }
    };
    ws.onerror = () => ws.close();
  }

  send(msg: ClientMessage): boolean {
    if (!this.ws || this.ws.readyState !== WebSocket.OPEN) return false;
    this.ws.send(JSON.stringify(msg));
    return true;
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}

export function defaultServerUrl(): string {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/ws`;
}
