name = "secureagg"
