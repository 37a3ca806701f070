"""
命令行界面
子命令、JSON 报告与 SVG 示意图
"""
