import { captureToWav } from "./wav.js";

/**
 * Microphone recorder: accumulates raw frames from an AudioContext and
 * encodes the take as 16 kHz mono WAV, the format the service ingests.
 */
export class MicRecorder {
  recording = false;

  private chunks: Float32Array[] = [];
  private context: AudioContext | null = null;
  private source: MediaStreamAudioSourceNode | null = null;
  private processor: ScriptProcessorNode | null = null;
  private stream: MediaStream | null = null;

  async start(): Promise<void> {
    if (this.recording) return;
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.context = new AudioContext();
    this.source = this.context.createMediaStreamSource(this.stream);
    this.processor = this.context.createScriptProcessor(4096, 1, 1);
    this.chunks = [];
    this.processor.onaudioprocess = (event) => {
      this.chunks.push(new Float32Array(event.inputBuffer.getChannelData(0)));
    };
    this.source.connect(this.processor);
    this.processor.connect(this.context.destination);
    this.recording = true;
  }

  /** Stop capturing and return the encoded WAV bytes. */
  async stop(): Promise<Uint8Array> {
    if (!this.recording || !this.context) throw new Error("not recording");
    const captureRate = this.context.sampleRate;
    this.processor?.disconnect();
    this.source?.disconnect();
    this.stream?.getTracks().forEach((track) => track.stop());
    await this.context.close();
    this.recording = false;

    let total = 0;
    for (const chunk of this.chunks) total += chunk.length;
    const merged = new Float32Array(total);
    let offset = 0;
    for (const chunk of this.chunks) {
      merged.set(chunk, offset);
      offset += chunk.length;
    }
    this.chunks = [];
    this.context = null;
    this.source = null;
    this.processor = null;
    this.stream = null;
    return captureToWav([merged], captureRate);
  }
}

/** Decode a base64 WAV reply and play it. */
export function playBase64Wav(b64: string): HTMLAudioElement {
  const binary = atob(b64);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < bytes.length; i++) bytes[i] = binary.charCodeAt(i);
  const url = URL.createObjectURL(new Blob([bytes], { type: "audio/wav" }));
  const audio = new Audio(url);
  audio.addEventListener("ended", () => URL.revokeObjectURL(url));
  void audio.play();
  return audio;
}
