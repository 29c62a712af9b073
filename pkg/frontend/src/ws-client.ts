import {
  StateMessage,
  UiControlState,
  decodeAudioBlock,
  decodeServerMessage,
  encodeControl,
} from "./protocol.js";

export interface VoiceClientHandlers {
  onState(s: StateMessage): void;
  onAudio(samples: Float32Array): void;
  onServerError(message: string): void;
  onStatus(connected: boolean): void;
}

// Owns the socket and its reconnect loop. All callbacks fire on the
// page's event loop; nothing here throws on a dead connection, the UI
// just keeps running against the last known state.
export class VoiceClient {
  private ws: WebSocket | null = null;
  private closed = false;
  private retryMs = 500;

  constructor(private url: string, private handlers: VoiceClientHandlers) {}

  connect(): void {
    if (this.closed) {
      return;
    }
    const ws = new WebSocket(this.url);
    ws.binaryType = "arraybuffer";
    ws.onopen = () => {
      this.retryMs = 500;
      this.handlers.onStatus(true);
    };
    ws.onmessage = (ev: MessageEvent) => {
      if (typeof ev.data === "string") {
        let msg;
        try {
          msg = decodeServerMessage(ev.data);
        } catch (e) {
          console.warn("undecodable frame", e);
          return;
        }
        if (msg.type === "state") {
          this.handlers.onState(msg);
        } else {
          this.handlers.onServerError(msg.message);
        }
      } else {
        this.handlers.onAudio(decodeAudioBlock(ev.data as ArrayBuffer));
      }
    };
    ws.onclose = () => {
      this.ws = null;
      this.handlers.onStatus(false);
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 4000);
      }
    };
    // the close event carries the story; an error alone must not throw
    ws.onerror = () => {};
    this.ws = ws;
  }

  // False when the socket is down; the caller keeps its local state and
  // the reconnect path pushes it once the session is back.
  send(s: UiControlState): boolean {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) {
      return false;
    }
    this.ws.send(encodeControl(s));
    return true;
  }

  close(): void {
    this.closed = true;
    if (this.ws !== null) {
      this.ws.close();
    }
  }
}
